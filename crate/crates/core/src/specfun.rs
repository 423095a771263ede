//! Complex Gamma, digamma, Barnes G and the Kummer confluent
//! hypergeometric functions φ(a, b, z) and ψ(a, 1, z).

use crate::error::{ensure_finite, Error, Result};
use crate::quadrature::gauss_legendre;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// Euler's constant γ_E.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// ln Γ together with arg Γ at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaBundle {
    /// Principal-branch ln Γ(z) (real part ln|Γ|, imaginary part the continuous argument).
    pub ln_gamma: (f64, f64),
    /// arg Γ(z) reduced to (−π, π].
    pub arg: f64,
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Lanczos evaluation, valid for Re z ≥ 0.5.
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Principal-branch ln Γ(z), continuous on ℂ \ (−∞, 0].
///
/// Uses the Lanczos approximation (g = 7, 9 terms) for Re z ≥ 0.5 and the
/// upward recurrence `ln Γ(z) = ln Γ(z + n) − Σ ln(z + k)` otherwise; each
/// logarithm in the sum has its cut on the negative real axis, so the
/// result is the continuous principal branch.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    ensure_finite("ln_gamma", &[z.re, z.im])?;
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { function: "ln_gamma", at: format!("{z}") });
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_lanczos(z));
    }
    let n = (0.5 - z.re).ceil() as usize;
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    Ok(ln_gamma_lanczos(z + n as f64) - shift)
}

/// Γ(z) for complex z.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    // ln_gamma only fails at poles, excluded above.
    (-ln_gamma(z).unwrap_or_default()).exp()
}

/// ln Γ and arg Γ bundled.
pub fn gamma_bundle(z: Complex64) -> Result<GammaBundle> {
    let l = ln_gamma(z)?;
    let mut arg = l.im.rem_euclid(2.0 * PI);
    if arg > PI {
        arg -= 2.0 * PI;
    }
    Ok(GammaBundle { ln_gamma: (l.re, l.im), arg })
}

/// Digamma Γ′(z)/Γ(z) by upward recurrence to |z| ≥ 12 followed by the
/// Bernoulli asymptotic series.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    ensure_finite("digamma", &[z.re, z.im])?;
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { function: "digamma", at: format!("{z}") });
    }
    const B2K_OVER_2K: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
        1.0 / 12.0,
        -3_617.0 / 8_160.0,
    ];
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 12.0 || w.norm() < 12.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for c in B2K_OVER_2K {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + w.ln() - 0.5 / w - series)
}

/// ln G(1 + z) for the Barnes G-function, Re z > −1, from
/// `ln G(1+z) = (z/2) ln 2π − z(z+1)/2 + z ln Γ(1+z) − ∫₀^z ln Γ(1+x) dx`,
/// the integral taken along the straight segment 0 → z by Gauss–Legendre
/// panels refined until two successive refinements agree to 1e−13.
pub fn barnes_ln_g(one_plus_z: Complex64) -> Result<Complex64> {
    let z = one_plus_z - 1.0;
    ensure_finite("barnes_ln_g", &[z.re, z.im])?;
    if z.re <= -1.0 {
        return Err(Error::Domain { function: "barnes_ln_g", detail: format!("Re z = {} ≤ −1", z.re) });
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let integral = segment_integral_ln_gamma(z)?;
    Ok(0.5 * z * (2.0 * PI).ln() - 0.5 * z * (z + 1.0) + z * ln_gamma(1.0 + z)? - integral)
}

/// ∫₀^z ln Γ(1 + x) dx along the segment, refined by panel doubling.
fn segment_integral_ln_gamma(z: Complex64) -> Result<Complex64> {
    let rule = gauss_legendre(20);
    let eval = |panels: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        let h = 1.0 / panels as f64;
        for p in 0..panels {
            let lo = p as f64 * h;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let u = lo + 0.5 * h * (t + 1.0);
                acc += 0.5 * h * w * ln_gamma(1.0 + z * u)?;
            }
        }
        Ok(acc * z)
    };
    let mut panels = 1;
    let mut prev = eval(panels)?;
    while panels < 4096 {
        panels *= 2;
        let next = eval(panels)?;
        if (next - prev).norm() <= 1e-13 * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { what: "barnes_ln_g", detail: "segment quadrature did not settle".into() })
}

/// Kummer's φ(a, b, z) = Σ (a)_k/(b)_k z^k/k! (also written M(a, b, z)).
///
/// Summation stops once a term falls below 1e−17 of the partial sum (and
/// the terms have started to decrease); more than 10 000 terms is an error.
pub fn kummer_phi(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    ensure_finite("kummer_phi", &[a.re, a.im, b.re, b.im, z.re, z.im])?;
    if is_nonpositive_integer(b) {
        return Err(Error::Pole { function: "kummer_phi", at: format!("b = {b}") });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..10_000usize {
        let kf = k as f64;
        term *= (a + kf) / ((b + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.norm() == 0.0 || (kf > z.norm() && term.norm() < 1e-17 * sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { what: "kummer_phi", detail: format!("10 000-term cap hit at |z| = {}", z.norm()) })
}

/// ψ(a, 1, z) (Tricomi's U(a, 1, z)) on the principal branch of ln z.
///
/// Evaluated by the logarithmic series
/// `ψ(a,1,z) = −(ln z/Γ(a)) φ(a,1,z) − (1/Γ(a)) Σ (a)_k/(k!)² [ψ₀(a+k) − 2ψ₀(1+k)] z^k`,
/// with ψ₀ the digamma function. The a → 0 limit is taken analytically, so
/// a = 0 returns exactly 1.
pub fn kummer_psi_b1(a: Complex64, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain { function: "kummer_psi_b1", detail: "z = 0".into() });
    }
    if z.norm() > 30.0 {
        return Err(Error::Domain { function: "kummer_psi_b1", detail: format!("|z| = {} > 30", z.norm()) });
    }
    kummer_psi_b1_with_log(a, z, z.ln())
}

/// Whether `z` lies on the branch cut of the principal logarithm, where
/// [`kummer_psi_b1`] takes the upper-side value.
pub fn on_branch_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re < 0.0
}

/// ψ(a, 1, z) with an explicitly supplied value of ln z, which selects the
/// sheet of the logarithm (used for analytic continuation across the cut).
pub fn kummer_psi_b1_with_log(a: Complex64, z: Complex64, ln_z: Complex64) -> Result<Complex64> {
    ensure_finite("kummer_psi_b1", &[a.re, a.im, z.re, z.im, ln_z.re, ln_z.im])?;
    if is_nonpositive_integer(a) && a.re != 0.0 {
        return Err(Error::Pole { function: "kummer_psi_b1", at: format!("a = {a}") });
    }
    // 1/Γ(a) written as a/Γ(1+a) so that a → 0 is regular.
    let g1a = recip_gamma(1.0 + a);
    let rga = a * g1a;
    let phi = kummer_phi(a, Complex64::new(1.0, 0.0), z)?;
    // k = 0 term of (1/Γ(a)) [ψ₀(a) − 2ψ₀(1)], with ψ₀(a) = ψ₀(1+a) − 1/a.
    let psi1a = digamma(1.0 + a)?;
    let mut series = (a * psi1a - 1.0) * g1a + rga * 2.0 * EULER_GAMMA;
    // k ≥ 1: coef_k = (a)_k/(k!)² / Γ(a), psi_ak = ψ₀(a+k), h = ψ₀(1+k).
    let mut coef = rga;
    let mut psi_ak = psi1a;
    let mut psi_1k = -EULER_GAMMA;
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..10_000usize {
        let kf = k as f64;
        coef *= (a + (kf - 1.0)) / (kf * kf);
        if k >= 2 {
            psi_ak += 1.0 / (a + (kf - 1.0));
        }
        psi_1k += 1.0 / kf;
        zk *= z;
        let term = coef * (psi_ak - 2.0 * psi_1k) * zk;
        series += term;
        if term.norm() == 0.0 && coef.norm() == 0.0 {
            break;
        }
        if kf > z.norm() && term.norm() < 1e-17 * series.norm().max(1e-300) {
            break;
        }
        if k == 9_999 {
            return Err(Error::NonConvergence { what: "kummer_psi_b1", detail: "series cap hit".into() });
        }
    }
    let value = -ln_z * rga * phi - series;
    ensure_finite("kummer_psi_b1", &[value.re, value.im])?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((ln_gamma(c(0.5, 0.0)).unwrap().re - 0.5 * PI.ln()).abs() < 1e-14);
        // Γ(5) = 24
        assert!((ln_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-13);
        // Γ(−0.5) = −2√π: real part ln(2√π), imaginary part ±π on the cut-plane branch.
        let v = ln_gamma(c(-0.5, 1e-300)).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_poles_are_errors() {
        assert!(matches!(ln_gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(ln_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn gamma_conjugate_product_matches_reflection() {
        let beta = c(0.0, 0.110_317_8);
        let g = gamma(1.0 + beta).unwrap();
        let lhs = g.norm_sqr();
        let rhs = (beta * PI / (beta * PI).sin()).re;
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn digamma_known_values() {
        assert!((digamma(c(1.0, 0.0)).unwrap().re + EULER_GAMMA).abs() < 1e-14);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(c(0.5, 0.0)).unwrap().re - half).abs() < 1e-14);
        // Reflection ψ(1−z) − ψ(z) = π cot(πz)
        let z = c(0.3, 0.7);
        let lhs = digamma(1.0 - z).unwrap() - digamma(z).unwrap();
        let rhs = PI * (PI * z).cos() / (PI * z).sin();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn digamma_matches_ln_gamma_difference() {
        let z = c(1.3, -0.4);
        let h = 1e-5;
        let fd = (ln_gamma(z + h).unwrap() - ln_gamma(z - h).unwrap()) / (2.0 * h);
        assert!((fd - digamma(z).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn barnes_special_values() {
        assert!(barnes_ln_g(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(barnes_ln_g(c(2.0, 0.0)).unwrap().norm() < 1e-12);
        assert!((barnes_ln_g(c(4.0, 0.0)).unwrap() - 2f64.ln()).norm() < 1e-12);
        assert!(barnes_ln_g(c(-0.5, 0.0)).is_err());
    }

    #[test]
    fn kummer_phi_basics() {
        let one = c(1.0, 0.0);
        assert_eq!(kummer_phi(c(0.3, 0.1), one, c(0.0, 0.0)).unwrap(), one);
        assert!((kummer_phi(one, one, one).unwrap().re - 1f64.exp()).abs() < 1e-14);
        assert!(kummer_phi(one, c(-2.0, 0.0), one).is_err());
    }

    #[test]
    fn kummer_psi_at_one_matches_exponential_integral() {
        // e·E₁(1), E₁(1) = 0.219383934395520...
        let v = kummer_psi_b1(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v.re - 1f64.exp() * 0.219_383_934_395_520_27).abs() < 1e-12);
    }

    #[test]
    fn kummer_psi_zero_parameter_is_one() {
        let v = kummer_psi_b1(c(0.0, 0.0), c(2.0, 1.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }
}
