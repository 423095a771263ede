//! Check the confluent hypergeometric model problem: jumps, unit determinant,
//! normalisation at infinity and the expansion at the origin.
//!
//! Run with `cargo run -p pearcey --example confluent_parametrix`.

use pearcey::chf::chf_report;

fn main() -> Result<(), pearcey::Error> {
    for beta_im in [0.05, 0.11, 0.3] {
        let r = chf_report(beta_im)?;
        println!(
            "β = {beta_im}i  max jump residual = {:.1e}  det drift = {:.1e}  error at |z| = 25: {:.1e}",
            r.max_ray_residual, r.det_constancy, r.infinity_normalisation
        );
        if let Some(e) = r.expansion {
            println!("    origin expansion: Υ₀ error {:.1e}, (Υ₁)₂₁ error {:.1e}", e.upsilon0_error, e.upsilon1_21_error);
        }
    }
    Ok(())
}
