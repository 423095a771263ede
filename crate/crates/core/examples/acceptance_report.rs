//! Run the acceptance criteria and print one line per criterion.
//!
//! Run with `cargo run -p pearcey --example acceptance_report`.

use pearcey::acceptance::run_all;

fn main() {
    for outcome in run_all() {
        println!("{}", outcome.line());
    }
}
