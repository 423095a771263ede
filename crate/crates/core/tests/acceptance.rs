//! Runs the twelve acceptance criteria, printing one line per criterion.
//! Criteria listed in `KNOWN_FAILURES` are reported as failures with their
//! reason but do not fail the run; any other failure does.

use pearcey::acceptance::{only_known_failures, run_all, CRITERIA, KNOWN_FAILURES};
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{}", o.line());
        if !o.passed {
            if let Some((_, why)) = KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id) {
                println!("       known failure: {why}");
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{CRITERIA} criteria passed");
    if only_known_failures(&outcomes) {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failure");
        ExitCode::FAILURE
    }
}
