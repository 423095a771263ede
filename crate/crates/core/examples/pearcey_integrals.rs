//! Evaluate the Pearcey integrals P, Q and their derivatives on a few points.
//!
//! Run with `cargo run -p pearcey --example pearcey_integrals`.

use pearcey::pearcey_fn::{p_third, pearcey_p, pearcey_q, q_third};

fn main() -> Result<(), pearcey::Error> {
    let rho = 0.5;
    println!("{:>6} {:>22} {:>22} {:>22} {:>22}", "x", "P(x)", "P'''(x)", "Q(x)", "Q'''(x)");
    for x in [-4.0, -1.0, 0.0, 0.5, 2.0, 6.0] {
        let p = pearcey_p(x, rho)?;
        let q = pearcey_q(x, rho)?;
        println!("{x:>6} {:>22.15e} {:>22.15e} {:>22.15e} {:>22.15e}", p.v0.0, p_third(x, rho, &p), q.v0.0, q_third(x, rho, &q));
    }
    Ok(())
}
