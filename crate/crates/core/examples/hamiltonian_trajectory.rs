//! Solve the Hamiltonian system whose Hamiltonian is the logarithmic
//! derivative of the gap probability, and check it against the determinant.
//!
//! Run with `cargo run -p pearcey --example hamiltonian_trajectory`.

use pearcey::asymptotics::h_large_s;
use pearcey::fredholm::resolvent_boundary_trace;
use pearcey::hamiltonian::{identity_report, solve_trajectory, SweepOptions};
use pearcey::ModelParams;

fn main() -> Result<(), pearcey::Error> {
    let params = ModelParams::new(0.5, 0.0)?;
    let (traj, report) = solve_trajectory(params, SweepOptions::default())?;
    println!("sweep: {} iterations, last change {:.1e}, converged = {}", report.iterations, report.last_change, report.converged);
    let ids = identity_report(&traj, params.rho)?;
    println!("max |Σ p_k q_k| = {:.1e}, max zero-curvature residual = {:.1e}", ids.max_constraint, ids.max_zero_curvature);
    for s in [1.0, 2.0, 4.0, 6.0, 8.0] {
        let sample = traj.nearest(s);
        // H = ½ dF/ds.
        let from_det = 0.5 * resolvent_boundary_trace(s, params, 128)?;
        println!("s = {s}  H = {:+.10}  ½ dF/ds = {:+.10}  asymptotic = {:+.10}", sample.h.re, from_det, h_large_s(s, params.gamma, params.rho)?);
    }
    Ok(())
}
