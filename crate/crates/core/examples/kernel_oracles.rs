//! Compare the rational, double-contour and Riemann–Hilbert forms of the
//! Pearcey kernel.
//!
//! Run with `cargo run -p pearcey --example kernel_oracles`.

use pearcey::kernel::{kernel, kernel_integral, kernel_rh};

fn main() -> Result<(), pearcey::Error> {
    let rho = 1.0;
    for (x, y) in [(-2.0, 1.0), (0.3, -0.7), (1.5, 2.5), (0.0, 0.0)] {
        let rational = kernel(x, y, rho)?;
        let integral = kernel_integral(x, y, rho)?;
        let rh = if x == y { f64::NAN } else { kernel_rh(x, y, rho)? };
        println!("K({x:+}, {y:+}) = {rational:.15e}  |Δ integral| = {:.1e}  |Δ RH| = {:.1e}", (rational - integral).abs(), (rational - rh).abs());
    }
    Ok(())
}
