//! Complex Γ, Barnes G and the confluent hypergeometric functions.
//!
//! Run with `cargo run -p pearcey --example special_functions`.

use num_complex::Complex64;
use pearcey::specfun::{barnes_ln_g, gamma, kummer_phi, kummer_psi_b1};

fn main() -> Result<(), pearcey::Error> {
    let z = Complex64::new(0.5, 1.0);
    println!("Γ({z}) = {}", gamma(z)?);
    println!("ln G(1 + {z}) = {}", barnes_ln_g(Complex64::new(1.0, 0.0) + z)?);
    let a = Complex64::new(0.0, 0.2);
    println!("φ({a}, 1; 2i) = {}", kummer_phi(a, Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0))?);
    println!("ψ({a}, 1; 2i) = {}", kummer_psi_b1(a, Complex64::new(0.0, 2.0))?);
    Ok(())
}
