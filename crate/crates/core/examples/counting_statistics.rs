//! Mean, variance and Gaussian fluctuations of the number of Pearcey points
//! in (−s, s).
//!
//! Run with `cargo run -p pearcey --example counting_statistics`.

use pearcey::asymptotics::{clt_distance_with, counting_stats};
use pearcey::fredholm::{moments_mgf_with, moments_trace_with, Discretisation};

fn main() -> Result<(), pearcey::Error> {
    let rho = 0.0;
    let t_grid = [-0.5, -0.25, 0.0, 0.25, 0.5];
    for s in [2.0, 4.0, 6.0, 8.0, 10.0] {
        let disc = Discretisation::new(s, rho, 100)?;
        let tr = moments_trace_with(&disc);
        let mgf = moments_mgf_with(&disc)?;
        let st = counting_stats(s, rho);
        let clt = clt_distance_with(&disc, s, rho, &t_grid)?;
        println!(
            "s = {s:4}  E N = {:.8} (mgf {:.8}, μ = {:.8})  Var N = {:.8} (σ² + const = {:.8})  CLT distance = {clt:.4}",
            tr.mean,
            mgf.mean,
            st.mu,
            tr.variance,
            st.sigma2 + st.var_const
        );
    }
    Ok(())
}
