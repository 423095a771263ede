//! Thinned gap probability det(I − γK) on (−s, s) and its large-gap asymptotics.
//!
//! Run with `cargo run -p pearcey --example gap_probability`.

use pearcey::asymptotics::f_large_gap;
use pearcey::fredholm::logdet_history;
use pearcey::ModelParams;

fn main() -> Result<(), pearcey::Error> {
    let params = ModelParams::new(0.5, 0.0)?;
    for h in logdet_history(3.0, params, 1e-12)? {
        println!("n = {:4}  F = {:.16e}  |ΔF| = {:.1e}", h.order, h.f, h.err_est);
    }
    println!();
    for s in [2.0, 4.0, 6.0, 8.0, 10.0] {
        let f = logdet_history(s, params, 1e-11)?.last().copied().expect("non-empty");
        let asy = f_large_gap(s, params.gamma, params.rho)?;
        println!("s = {s:4}  F = {:+.12}  asymptotic = {:+.12}  gap probability = {:.6e}", f.f, asy.total, f.f.exp());
    }
    Ok(())
}
