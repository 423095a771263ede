//! Closed-form large-s expansions: β(γ), θ₃, ϑ, the large-gap asymptotics
//! of F, its γ = 1 counterpart, the large-s behaviour of H, the counting
//! statistics μ and σ², the moment-generating prefactor and the CLT
//! distance.

use crate::error::{Error, Result};
use crate::fredholm::{log_mgf_with, Discretisation};
use crate::specfun::{barnes_ln_g, ln_gamma, EULER_GAMMA};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Threshold for discarding imaginary parts of quantities that are real in
/// exact arithmetic.
const REAL_TOL: f64 = 1e-12;

fn coerce(what: &'static str, z: Complex64) -> Result<f64> {
    if z.im.abs() > REAL_TOL * (1.0 + z.re.abs()) {
        return Err(Error::ImaginaryResidue { what, im: z.im });
    }
    Ok(z.re)
}

/// β = (1/2πi) ln(1 − γ) = i·(−ln(1 − γ))/(2π), for 0 ≤ γ < 1.
pub fn beta_of_gamma(gamma: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain { function: "beta_of_gamma", detail: format!("gamma = {gamma} not in [0, 1)") });
    }
    Ok(Complex64::new(0.0, -(1.0 - gamma).ln() / (2.0 * PI)))
}

/// The real number βi = −Im β (so that β = −i·(βi)).
fn beta_i(gamma: f64) -> Result<(Complex64, f64)> {
    let b = beta_of_gamma(gamma)?;
    Ok((b, (b * Complex64::i()).re))
}

/// θ₃(s; ρ) = ¾s^{4/3} + (ρ/2)s^{2/3}.
pub fn theta3(s: f64, rho: f64) -> f64 {
    0.75 * s.powf(4.0 / 3.0) + 0.5 * rho * s.powf(2.0 / 3.0)
}

/// ϑ(s) = −(3√3/8)s^{4/3} + (√3ρ/4)s^{2/3} + arg Γ(1 − β) − βi(⁴⁄₃ ln s + ln(9/2)).
pub fn vartheta(s: f64, gamma: f64, rho: f64) -> Result<f64> {
    let (b, bi) = beta_i(gamma)?;
    let arg_gamma = ln_gamma(Complex64::new(1.0, 0.0) - b)?.im;
    let v = -(3.0 * 3f64.sqrt() / 8.0) * s.powf(4.0 / 3.0) + (3f64.sqrt() * rho / 4.0) * s.powf(2.0 / 3.0) + arg_gamma
        - bi * (4.0 / 3.0 * s.ln() + 4.5f64.ln());
    Ok(v)
}

/// The terms of the large-gap expansion of F(s; γ, ρ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapAsymptotics {
    /// (3√3/2)βi·s^{4/3}.
    pub leading: f64,
    /// −√3ρβi·s^{2/3}.
    pub subleading: f64,
    /// −(8β²/3) ln s.
    pub log_term: f64,
    /// −2β² ln(9/2) + 2 ln(G(1 + β)G(1 − β)).
    pub constant: f64,
    /// Sum of the four parts.
    pub total: f64,
}

/// Large-gap asymptotics of F for 0 ≤ γ < 1.
pub fn f_large_gap(s: f64, gamma: f64, rho: f64) -> Result<GapAsymptotics> {
    if gamma == 1.0 {
        return Err(Error::Domain { function: "f_large_gap", detail: "gamma = 1: use f_gamma1".into() });
    }
    if !(s > 0.0) {
        return Err(Error::Domain { function: "f_large_gap", detail: format!("s = {s} must be positive") });
    }
    let (b, bi) = beta_i(gamma)?;
    let b2 = coerce("f_large_gap", b * b)?;
    let one = Complex64::new(1.0, 0.0);
    let barnes = coerce("f_large_gap", 2.0 * (barnes_ln_g(one + b)? + barnes_ln_g(one - b)?))?;
    let leading = 1.5 * 3f64.sqrt() * bi * s.powf(4.0 / 3.0);
    let subleading = -(3f64.sqrt()) * rho * bi * s.powf(2.0 / 3.0);
    let log_term = -(8.0 * b2 / 3.0) * s.ln();
    let constant = -2.0 * b2 * 4.5f64.ln() + barnes;
    Ok(GapAsymptotics { leading, subleading, log_term, constant, total: leading + subleading + log_term + constant })
}

/// γ = 1 expansion with a caller-supplied constant C:
/// −9s^{8/3}/2^{17/3} + ρs²/4 − ρ²s^{4/3}/2^{10/3} − (2/9) ln s + ρ⁴/216 + C.
pub fn f_gamma1(s: f64, rho: f64, c: f64) -> f64 {
    -9.0 * s.powf(8.0 / 3.0) / 2f64.powf(17.0 / 3.0) + rho * s * s / 4.0
        - rho * rho * s.powf(4.0 / 3.0) / 2f64.powf(10.0 / 3.0)
        - (2.0 / 9.0) * s.ln()
        + rho.powi(4) / 216.0
        + c
}

/// Least-squares estimate of the γ = 1 constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantFit {
    /// C from the model r(s) = C + a·s^{−2/3}.
    pub c: f64,
    /// Coefficient a of s^{−2/3}.
    pub slope_coeff: f64,
    /// Statistical standard error of C in the two-term model.
    pub stat_err: f64,
    /// C from the three-term model C + a·s^{−2/3} + b·s^{−4/3}.
    pub c_three_term: f64,
    /// Combined error bar: hypot(stat_err, |c − c_three_term|).
    pub err_bar: f64,
    /// Residuals r(s) = F(s) − f_gamma1(s, ρ, 0).
    pub residuals: Vec<f64>,
}

/// Least squares with standard errors; columns are basis functions.
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = cols.len();
    let m = y.len();
    if m <= k {
        return Err(Error::Domain { function: "fit_gamma1_constant", detail: "need more points than parameters".into() });
    }
    let mut ata = crate::linalg::Matrix::zeros(k);
    let mut aty = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            ata[(i, j)] = (0..m).map(|r| cols[i][r] * cols[j][r]).sum();
        }
        aty[i] = (0..m).map(|r| cols[i][r] * y[r]).sum();
    }
    let lu = crate::linalg::Lu::factor(ata)?;
    let coef = lu.solve(&aty);
    let rss: f64 = (0..m)
        .map(|r| {
            let fit: f64 = (0..k).map(|i| coef[i] * cols[i][r]).sum();
            (y[r] - fit).powi(2)
        })
        .sum();
    let s2 = rss / (m - k) as f64;
    let se = (0..k)
        .map(|i| {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            (s2 * lu.solve(&e)[i]).sqrt()
        })
        .collect();
    Ok((coef, se))
}

/// Fit the undetermined γ = 1 constant from numeric values F(sᵢ; 1, ρ).
///
/// The reported error bar combines the regression standard error with the
/// model-truncation uncertainty (shift of C when an s^{−4/3} term is added).
pub fn fit_gamma1_constant(s: &[f64], f: &[f64], rho: f64) -> Result<ConstantFit> {
    let r: Vec<f64> = s.iter().zip(f).map(|(&si, &fi)| fi - f_gamma1(si, rho, 0.0)).collect();
    let ones = vec![1.0; s.len()];
    let c1: Vec<f64> = s.iter().map(|x| x.powf(-2.0 / 3.0)).collect();
    let c2: Vec<f64> = s.iter().map(|x| x.powf(-4.0 / 3.0)).collect();
    let (coef2, se2) = least_squares(&[ones.clone(), c1.clone()], &r)?;
    let (coef3, _) = least_squares(&[ones, c1, c2], &r)?;
    let err_bar = se2[0].hypot(coef2[0] - coef3[0]);
    Ok(ConstantFit { c: coef2[0], slope_coeff: coef2[1], stat_err: se2[0], c_three_term: coef3[0], err_bar, residuals: r })
}

/// Large-s asymptotics of H(s) for 0 ≤ γ < 1:
/// √3βi·s^{1/3} − ρβi/(√3s^{1/3}) − 4β²/(3s) − (2√3βi/(9s)) cos 2ϑ(s).
pub fn h_large_s(s: f64, gamma: f64, rho: f64) -> Result<f64> {
    let (b, bi) = beta_i(gamma)?;
    let b2 = coerce("h_large_s", b * b)?;
    let r3 = 3f64.sqrt();
    let th = vartheta(s, gamma, rho)?;
    Ok(r3 * bi * s.cbrt() - rho * bi / (r3 * s.cbrt()) - 4.0 * b2 / (3.0 * s)
        - (2.0 * r3 * bi / (9.0 * s)) * (2.0 * th).cos())
}

/// [`h_large_s`] without the oscillatory cos 2ϑ term.
pub fn h_large_s_smooth(s: f64, gamma: f64, rho: f64) -> Result<f64> {
    let (b, bi) = beta_i(gamma)?;
    let b2 = coerce("h_large_s", b * b)?;
    let r3 = 3f64.sqrt();
    Ok(r3 * bi * s.cbrt() - rho * bi / (r3 * s.cbrt()) - 4.0 * b2 / (3.0 * s))
}

/// γ = 1 large-s behaviour of H: −3s^{5/3}/2^{11/3} + ρs/4 − ρ²s^{1/3}/(3·2^{7/3}) − 1/(9s).
pub fn h_gamma1(s: f64, rho: f64) -> f64 {
    -3.0 * s.powf(5.0 / 3.0) / 2f64.powf(11.0 / 3.0) + rho * s / 4.0
        - rho * rho * s.cbrt() / (3.0 * 2f64.powf(7.0 / 3.0))
        - 1.0 / (9.0 * s)
}

/// Asymptotic mean and variance of the counting statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingStats {
    /// μ(s) = (3√3/4π)s^{4/3} − (√3ρ/2π)s^{2/3}.
    pub mu: f64,
    /// σ(s)² = (4/3π²) ln s.
    pub sigma2: f64,
    /// The variance constant (1 + ln(9/2) + γ_E)/π².
    pub var_const: f64,
}

/// μ(s), σ(s)² and the variance constant.
pub fn counting_stats(s: f64, rho: f64) -> CountingStats {
    let r3 = 3f64.sqrt();
    CountingStats {
        mu: 3.0 * r3 / (4.0 * PI) * s.powf(4.0 / 3.0) - r3 * rho / (2.0 * PI) * s.powf(2.0 / 3.0),
        sigma2: 4.0 / (3.0 * PI * PI) * s.ln(),
        var_const: (1.0 + 4.5f64.ln() + EULER_GAMMA) / (PI * PI),
    }
}

/// (9/2)^{2ν²}G(1 + iν)²G(1 − iν)²e^{−2πμν + 2π²σ²ν²}.
pub fn mgf_prefactor(nu: f64, s: f64, rho: f64) -> Result<f64> {
    let st = counting_stats(s, rho);
    let one = Complex64::new(1.0, 0.0);
    let iv = Complex64::new(0.0, nu);
    let barnes = coerce("mgf_prefactor", 2.0 * (barnes_ln_g(one + iv)? + barnes_ln_g(one - iv)?))?;
    let ln = 2.0 * nu * nu * 4.5f64.ln() + barnes - 2.0 * PI * st.mu * nu + 2.0 * PI * PI * st.sigma2 * nu * nu;
    Ok(ln.exp())
}

/// sup over `t_grid` of |E e^{t(N−μ)/σ} − e^{t²/2}|, with
/// E e^{t(N−μ)/σ} = exp(L(−t/(2πσ)) − tμ/σ) and L the log-determinant
/// at γ = 1 − e^{−2πν}, evaluated on the given discretisation of (−s, s).
pub fn clt_distance_with(disc: &Discretisation, s: f64, rho: f64, t_grid: &[f64]) -> Result<f64> {
    let st = counting_stats(s, rho);
    let sigma = st.sigma2.sqrt();
    if !(sigma > 0.0) {
        return Err(Error::Domain { function: "clt_distance", detail: format!("sigma(s) = 0 at s = {s}") });
    }
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let l = log_mgf_with(disc, -t / (2.0 * PI * sigma))?;
        let e = (l - t * st.mu / sigma).exp();
        worst = worst.max((e - (t * t / 2.0).exp()).abs());
    }
    Ok(worst)
}

/// [`clt_distance_with`] building an n-point discretisation.
pub fn clt_distance(s: f64, rho: f64, t_grid: &[f64], n: usize) -> Result<f64> {
    if s < 4.0 {
        return Err(Error::Domain { function: "clt_distance", detail: format!("s = {s} < 4") });
    }
    let disc = Discretisation::new(s, rho, n)?;
    clt_distance_with(&disc, s, rho, t_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(beta_of_gamma(0.0).unwrap(), Complex64::new(0.0, 0.0));
        assert!((beta_of_gamma(0.5).unwrap().im - 0.110_317_8).abs() < 1e-7);
        let b = beta_of_gamma(1.0 - (-2.0 * PI).exp()).unwrap();
        assert!((b - Complex64::i()).norm() < 1e-12);
        assert!(beta_of_gamma(1.0).is_err());
        assert!(beta_of_gamma(-0.1).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(theta3(1.0, 0.0), 0.75);
        assert!((vartheta(1.0, 0.0, 0.0).unwrap() + 3.0 * 3f64.sqrt() / 8.0).abs() < 1e-15);
        assert!(vartheta(5.0, 0.9, -1.0).unwrap().is_finite());
        let g = f_large_gap(1.0, 0.5, 0.0).unwrap();
        // (3√3/2)·ln2/(2π)
        assert!((g.leading + 0.286_614_052_067_133).abs() < 1e-12);
        assert!((f_gamma1(1.0, 0.0, 0.0) + 9.0 / 2f64.powf(17.0 / 3.0)).abs() < 1e-15);
        assert!((f_gamma1(1.0, 0.0, 0.0) + 0.177_176_397_641_466).abs() < 1e-12);
        let st = counting_stats(1.0, 0.0);
        assert!((st.mu - 0.413_496_7).abs() < 1e-7);
        assert_eq!(st.sigma2, 0.0);
        assert!((st.var_const - 0.312_200).abs() < 1e-6);
        assert!((mgf_prefactor(0.0, 4.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_zero_is_trivial() {
        for s in [0.5, 3.0, 11.0] {
            assert!(f_large_gap(s, 0.0, 1.3).unwrap().total.abs() < 1e-15);
            assert!(h_large_s(s, 0.0, -0.7).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn fit_recovers_synthetic_constant() {
        let s: Vec<f64> = (0..9).map(|i| 6.0 + 0.5 * i as f64).collect();
        let f: Vec<f64> = s.iter().map(|&x| f_gamma1(x, 0.5, -0.3) + 0.02 * x.powf(-2.0 / 3.0)).collect();
        let fit = fit_gamma1_constant(&s, &f, 0.5).unwrap();
        assert!((fit.c + 0.3).abs() < 1e-10);
        assert!(fit.err_bar < 1e-9);
    }
}
