//! Pearcey integrals P, Q, the contour solutions 𝒫ⱼ and the matrix Ψ̃.
//!
//! All integrals are computed by composite 12-point Gauss–Legendre panels
//! of width 0.2. Derivatives are obtained by inserting powers of `it`
//! under the integral; third derivatives come from the Pearcey ODEs
//! `P‴ = xP + ρP′` and `Q‴ = −yQ + ρQ′`.

use crate::error::{Error, Result};
use crate::quadrature::{composite_panels, ray_cutoff, PANEL_WIDTH};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Mutex;

/// Largest |argument| accepted by the real-axis evaluators.
pub const MAX_ARG: f64 = 60.0;
/// Largest |z| accepted by the contour solutions 𝒫ⱼ.
pub const MAX_PJ_ARG: f64 = 40.0;
/// Relative tolerance for discarding the imaginary residue of P and Q.
const REAL_TOL: f64 = 1e-10;

/// The problem's scalar parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// Thinning parameter γ ∈ [0, 1].
    pub gamma: f64,
    /// Pearcey parameter ρ.
    pub rho: f64,
}

impl ModelParams {
    /// Validate and build; γ must lie in [0, 1].
    pub fn new(gamma: f64, rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) || !rho.is_finite() {
            return Err(Error::Domain { function: "ModelParams::new", detail: format!("gamma = {gamma}, rho = {rho}") });
        }
        Ok(Self { gamma, rho })
    }

    /// β = (1/2πi) ln(1 − γ) = i·(−ln(1−γ))/(2π); `None` at γ = 1.
    pub fn beta(&self) -> Option<Complex64> {
        crate::asymptotics::beta_of_gamma(self.gamma).ok()
    }
}

/// A function value with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PearceyValues {
    /// Value.
    pub v0: (f64, f64),
    /// First derivative.
    pub v1: (f64, f64),
    /// Second derivative.
    pub v2: (f64, f64),
}

impl PearceyValues {
    fn from_complex(v: [Complex64; 3]) -> Self {
        Self { v0: (v[0].re, v[0].im), v1: (v[1].re, v[1].im), v2: (v[2].re, v[2].im) }
    }

    /// Entry `k` (0, 1, 2) as a complex number.
    pub fn get(&self, k: usize) -> Complex64 {
        let (re, im) = match k {
            0 => self.v0,
            1 => self.v1,
            2 => self.v2,
            _ => panic!("PearceyValues::get: index {k} out of range"),
        };
        Complex64::new(re, im)
    }

    /// Real parts `[v0, v1, v2]`.
    pub fn real(&self) -> [f64; 3] {
        [self.v0.0, self.v1.0, self.v2.0]
    }
}

fn check_arg(function: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > MAX_ARG {
        return Err(Error::Domain { function, detail: format!("|argument| = {} exceeds {MAX_ARG}", x.abs()) });
    }
    Ok(())
}

fn coerce_real(what: &'static str, v: [Complex64; 3]) -> Result<PearceyValues> {
    for z in v {
        if z.im.abs() > REAL_TOL * (1.0 + z.re.abs()) {
            return Err(Error::ImaginaryResidue { what, im: z.im });
        }
    }
    Ok(PearceyValues { v0: (v[0].re, 0.0), v1: (v[1].re, 0.0), v2: (v[2].re, 0.0) })
}

/// Height of the horizontal integration line for P(x), x ≥ 0.
///
/// On the line Im t = c the log-modulus of the integrand, as a function of
/// w = (Re t)², is `−(w² − 6wc² + c⁴)/4 − ρ(w − c²)/2 − xc`; its maximum over
/// w ≥ 0 is minimised over a grid of c so that the quadrature never sums
/// terms much larger than the result.
fn p_shift(ax: f64, rho: f64) -> f64 {
    let peak = |c: f64| {
        let w = (3.0 * c * c - rho).max(0.0);
        -(w * w - 6.0 * w * c * c + c.powi(4)) / 4.0 - rho * (w - c * c) / 2.0 - ax * c
    };
    let c_max = ax.cbrt() + 1.5;
    let steps = 400;
    (0..steps)
        .map(|i| c_max * i as f64 / (steps - 1) as f64)
        .min_by(|a, b| peak(*a).total_cmp(&peak(*b)))
        .unwrap_or(0.0)
}

/// P(x) = (1/2π)∫_ℝ e^{−t⁴/4 − ρt²/2 + itx} dt and its first two derivatives.
///
/// The real line is shifted to Im t = c (Cauchy) to avoid cancellation for
/// large |x|; the truncation radius adapts to the Gaussian-quartic decay.
pub fn pearcey_p(x: f64, rho: f64) -> Result<PearceyValues> {
    check_arg("pearcey_p", x)?;
    let m = p_moments(x, rho);
    coerce_real("pearcey_p", [m[0], m[1], m[2]])
}

/// P‴(x) by direct quadrature of (1/2π)∫(it)³e^{…}dt, independent of the
/// ODE (used to check it).
pub fn pearcey_p_third_direct(x: f64, rho: f64) -> Result<f64> {
    check_arg("pearcey_p", x)?;
    let m = p_moments(x, rho);
    Ok(coerce_real("pearcey_p", [m[3], m[3], m[3]])?.v0.0)
}

/// (1/2π)∫ (it)^k e^{−t⁴/4 − ρt²/2 + itx} dt for k = 0..=3 on the shifted
/// line, with the odd moments sign-corrected for x < 0.
fn p_moments(x: f64, rho: f64) -> [Complex64; 4] {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let c = p_shift(ax, rho);
    let t_max = ray_cutoff((3.0 * c * c - rho) / 2.0, 0.0);
    let (u, w) = composite_panels(-t_max, t_max, PANEL_WIDTH);
    let mut acc = [Complex64::new(0.0, 0.0); 4];
    for (ui, wi) in u.iter().zip(&w) {
        let t = Complex64::new(*ui, c);
        let t2 = t * t;
        let mut f = (-(t2 * t2) / 4.0 - rho * t2 / 2.0 + Complex64::i() * t * ax).exp() * *wi;
        let it = Complex64::i() * t;
        for a in &mut acc {
            *a += f;
            f *= it;
        }
    }
    for a in &mut acc {
        *a /= 2.0 * PI;
    }
    acc[1] *= sign;
    acc[3] *= sign;
    acc
}

/// The four rays of Σ: (angle, orientation), orientation −1 meaning the ray
/// is traversed towards the origin.
const SIGMA_RAYS: [(f64, f64); 4] =
    [(FRAC_PI_4, -1.0), (3.0 * FRAC_PI_4, 1.0), (5.0 * FRAC_PI_4, -1.0), (7.0 * FRAC_PI_4, 1.0)];

/// Q(y) = (1/2π)∫_Σ e^{t⁴/4 + ρt²/2 + ity} dt and its first two derivatives.
///
/// Σ consists of the rays through the origin at angles π/4 and 5π/4
/// (oriented inwards) and 3π/4 and 7π/4 (oriented outwards); on each ray
/// t⁴/4 = −r⁴/4.
pub fn pearcey_q(y: f64, rho: f64) -> Result<PearceyValues> {
    check_arg("pearcey_q", y)?;
    let m = q_moments(y, rho);
    coerce_real("pearcey_q", [m[0], m[1], m[2]])
}

/// Q‴(y) by direct quadrature of (1/2π)∫_Σ(it)³e^{…}dt, independent of
/// the ODE (used to check it).
pub fn pearcey_q_third_direct(y: f64, rho: f64) -> Result<f64> {
    check_arg("pearcey_q", y)?;
    let m = q_moments(y, rho);
    Ok(coerce_real("pearcey_q", [m[3], m[3], m[3]])?.v0.0)
}

/// (1/2π)∫_Σ (it)^k e^{t⁴/4 + ρt²/2 + ity} dt for k = 0..=3.
fn q_moments(y: f64, rho: f64) -> [Complex64; 4] {
    let mut acc = [Complex64::new(0.0, 0.0); 4];
    for (theta, orient) in SIGMA_RAYS {
        let e = Complex64::from_polar(1.0, theta);
        let r_max = ray_cutoff(0.0, -y * theta.sin());
        let (r, w) = composite_panels(0.0, r_max, PANEL_WIDTH);
        for (ri, wi) in r.iter().zip(&w) {
            let t = e * *ri;
            let t2 = t * t;
            let mut f = (t2 * t2 / 4.0 + rho * t2 / 2.0 + Complex64::i() * t * y).exp() * e * (orient * wi);
            let it = Complex64::i() * t;
            for a in &mut acc {
                *a += f;
                f *= it;
            }
        }
    }
    for a in &mut acc {
        *a /= 2.0 * PI;
    }
    acc
}

/// Third derivative of P from its ODE.
pub fn p_third(x: f64, rho: f64, p: &PearceyValues) -> f64 {
    x * p.v0.0 + rho * p.v1.0
}

/// Third derivative of Q from its ODE.
pub fn q_third(y: f64, rho: f64, q: &PearceyValues) -> f64 {
    -y * q.v0.0 + rho * q.v1.0
}

/// ∫₀^{d·∞} e^{−t⁴/4 − ρt²/2 + itz}(it)^k dt for k = 0, 1, 2 along the
/// direction `d` ∈ {±1, ±i}.
fn pj_ray(z: Complex64, rho: f64, d: Complex64) -> [Complex64; 3] {
    let d2 = (d * d).re;
    let a = -rho * d2 / 2.0;
    let b = -(d * z).im;
    let r_max = ray_cutoff(a, b);
    let (r, w) = composite_panels(0.0, r_max, PANEL_WIDTH);
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for (ri, wi) in r.iter().zip(&w) {
        let t = d * *ri;
        let t2 = t * t;
        let f = (-(t2 * t2) / 4.0 - rho * t2 / 2.0 + Complex64::i() * t * z).exp() * d * *wi;
        let it = Complex64::i() * t;
        acc[0] += f;
        acc[1] += f * it;
        acc[2] += f * it * it;
    }
    acc
}

/// All six contour solutions 𝒫₀..𝒫₅ at `z` (value and two derivatives).
///
/// With R± = ∫₀^{±∞} and I± = ∫₀^{±i∞}:
/// 𝒫₀ = R₊ − R₋, 𝒫₁ = −I₊ + R₊, 𝒫₂ = −I₊ + R₋, 𝒫₃ = −I₋ + R₋,
/// 𝒫₄ = −I₋ + R₊, 𝒫₅ = −I₋ + I₊. Every half-line already lies in a decay
/// sector of e^{−t⁴/4}, so no contour rotation is required.
pub fn pearcey_pj_all(z: Complex64, rho: f64) -> Result<[[Complex64; 3]; 6]> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > MAX_PJ_ARG {
        return Err(Error::Domain { function: "pearcey_pj", detail: format!("|z| = {} exceeds {MAX_PJ_ARG}", z.norm()) });
    }
    let one = Complex64::new(1.0, 0.0);
    let rp = pj_ray(z, rho, one);
    let rm = pj_ray(z, rho, -one);
    let ip = pj_ray(z, rho, Complex64::i());
    let im = pj_ray(z, rho, -Complex64::i());
    let comb = |a: [Complex64; 3], sa: f64, b: [Complex64; 3], sb: f64| {
        [sa * a[0] + sb * b[0], sa * a[1] + sb * b[1], sa * a[2] + sb * b[2]]
    };
    Ok([
        comb(rp, 1.0, rm, -1.0),
        comb(ip, -1.0, rp, 1.0),
        comb(ip, -1.0, rm, 1.0),
        comb(im, -1.0, rm, 1.0),
        comb(im, -1.0, rp, 1.0),
        comb(im, -1.0, ip, 1.0),
    ])
}

/// The contour solution 𝒫ⱼ (j = 0..5) at `z`.
pub fn pearcey_pj(z: Complex64, rho: f64, j: usize) -> Result<PearceyValues> {
    if j > 5 {
        return Err(Error::Domain { function: "pearcey_pj", detail: format!("index {j} not in 0..=5") });
    }
    Ok(PearceyValues::from_complex(pearcey_pj_all(z, rho)?[j]))
}

/// The 3×3 matrix Ψ̃(z): columns 𝒫₀, 𝒫₁, 𝒫₄, rows value, ′, ″.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiTilde {
    /// Row-major entries.
    pub m: [[Complex64; 3]; 3],
}

impl PsiTilde {
    /// Determinant.
    pub fn det(&self) -> Complex64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Row-major flattening.
    pub fn flat(&self) -> Vec<Complex64> {
        self.m.iter().flatten().copied().collect()
    }
}

/// Assemble Ψ̃(z) for real z.
pub fn tilde_psi(z: f64, rho: f64) -> Result<PsiTilde> {
    let all = pearcey_pj_all(Complex64::new(z, 0.0), rho)?;
    let cols = [all[0], all[1], all[4]];
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = col[i];
        }
    }
    Ok(PsiTilde { m })
}

/// Which Pearcey integral a cached value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PearceyKind {
    /// P(x).
    P,
    /// Q(y).
    Q,
}

/// Thread-safe memo of P/Q evaluations keyed by the bit pattern of the
/// argument and ρ.
#[derive(Debug, Default)]
pub struct PearceyCache {
    map: Mutex<HashMap<(u64, u64, PearceyKind), PearceyValues>>,
}

impl PearceyCache {
    /// Empty cache.
    pub fn new() -> Self {
        Self::default()
    }

    /// Cached evaluation of P or Q.
    pub fn get(&self, kind: PearceyKind, x: f64, rho: f64) -> Result<PearceyValues> {
        let key = (x.to_bits(), rho.to_bits(), kind);
        if let Some(v) = self.map.lock().map_err(|_| Error::NotFinite { what: "PearceyCache" })?.get(&key) {
            return Ok(*v);
        }
        let v = match kind {
            PearceyKind::P => pearcey_p(x, rho)?,
            PearceyKind::Q => pearcey_q(x, rho)?,
        };
        self.map.lock().map_err(|_| Error::NotFinite { what: "PearceyCache" })?.insert(key, v);
        Ok(v)
    }

    /// Number of memoised entries.
    pub fn len(&self) -> usize {
        self.map.lock().map(|m| m.len()).unwrap_or(0)
    }

    /// Whether the cache is empty.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_at_origin_matches_gamma_closed_form() {
        // Γ(1/4)/(π·4^{3/4})
        let gamma_quarter = 3.625_609_908_221_908;
        let expected = gamma_quarter / (PI * 4f64.powf(0.75));
        let p = pearcey_p(0.0, 0.0).unwrap();
        assert!((p.v0.0 - expected).abs() < 1e-13);
        assert!(p.v1.0.abs() < 1e-15);
    }

    #[test]
    fn q_is_odd_and_real() {
        let q0 = pearcey_q(0.0, 0.0).unwrap();
        assert!(q0.v0.0.abs() < 1e-13);
        let a = pearcey_q(0.7, 0.3).unwrap();
        let b = pearcey_q(-0.7, 0.3).unwrap();
        assert!((a.v0.0 + b.v0.0).abs() < 1e-13);
        assert!((a.v1.0 - b.v1.0).abs() < 1e-13);
    }

    #[test]
    fn p_is_even() {
        let a = pearcey_p(2.3, -1.0).unwrap();
        let b = pearcey_p(-2.3, -1.0).unwrap();
        assert!((a.v0.0 - b.v0.0).abs() < 1e-14 && (a.v1.0 + b.v1.0).abs() < 1e-14);
    }

    #[test]
    fn contour_additivity() {
        let all = pearcey_pj_all(Complex64::new(0.3, 0.0), 1.0).unwrap();
        for k in 0..3 {
            assert!((all[0][k] - (all[1][k] - all[2][k])).norm() < 1e-12);
            assert!((all[5][k] - (all[4][k] - all[1][k])).norm() < 1e-12);
        }
    }

    #[test]
    fn first_column_of_psi_tilde_is_two_pi_p() {
        let psi = tilde_psi(1.0, 0.0).unwrap();
        let p = pearcey_p(1.0, 0.0).unwrap();
        for k in 0..3 {
            assert!((psi.m[k][0] - 2.0 * PI * p.real()[k]).norm() < 1e-9);
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(pearcey_p(61.0, 0.0).is_err());
        assert!(pearcey_pj(Complex64::new(41.0, 0.0), 0.0, 0).is_err());
        assert!(pearcey_pj(Complex64::new(1.0, 0.0), 0.0, 6).is_err());
    }

    #[test]
    fn cache_reuses_entries() {
        let cache = PearceyCache::new();
        let a = cache.get(PearceyKind::P, 0.5, 0.0).unwrap();
        let b = cache.get(PearceyKind::P, 0.5, 0.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }
}
