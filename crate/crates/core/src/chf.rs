//! The confluent hypergeometric parametrix Φ(z; β): a piecewise-analytic
//! 2×2 matrix built from Kummer ψ-functions with constant jumps across six
//! rays from the origin, together with checks of its jumps, its
//! normalisation at infinity and its expansion at the origin.
//!
//! Rays Σ̂₁,…,Σ̂₆ leave the origin at angles 0, π/6, 5π/6, π, 7π/6, 11π/6.
//! Σ̂₁, Σ̂₂, Σ̂₆ are oriented away from the origin and Σ̂₃, Σ̂₄, Σ̂₅ towards
//! it; the + side of a ray is on its left. Sector k is the region between
//! Σ̂ₖ and Σ̂ₖ₊₁ (sector 6 closes up against Σ̂₁).

use crate::error::{Error, Result};
use crate::linalg::{mat2_det, mat2_inv, mat2_max_diff, mat2_mul, Mat2};
use crate::specfun::{digamma, gamma, kummer_psi_b1_with_log, recip_gamma, ComplexScalar, EULER_GAMMA};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Smallest |z| accepted by [`SectorPoint`].
pub const MIN_RADIUS: f64 = 1e-3;
/// Largest |z| accepted by [`SectorPoint`]; keeps the ψ log-series within
/// its accuracy budget.
pub const MAX_RADIUS: f64 = 25.0;
/// Largest |β| accepted.
pub const MAX_BETA: f64 = 0.5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Angle of ray Σ̂ⱼ, j = 1..=6.
pub fn ray_angle(ray: usize) -> f64 {
    [0.0, PI / 6.0, 5.0 * PI / 6.0, PI, 7.0 * PI / 6.0, 11.0 * PI / 6.0][ray - 1]
}

/// Whether Σ̂ⱼ points away from the origin.
pub fn ray_outward(ray: usize) -> bool {
    matches!(ray, 1 | 2 | 6)
}

fn check_ray(ray: usize) -> Result<()> {
    if !(1..=6).contains(&ray) {
        return Err(Error::Domain { function: "chf", detail: format!("ray index {ray} not in 1..=6") });
    }
    Ok(())
}

fn check_beta(beta: ComplexScalar) -> Result<()> {
    if !(beta.re == 0.0 && beta.im.is_finite() && beta.im.abs() <= MAX_BETA) {
        return Err(Error::Domain { function: "chf", detail: format!("beta = {beta} must be purely imaginary with |beta| <= {MAX_BETA}") });
    }
    Ok(())
}

/// e^{βπi·k}.
fn e_beta(beta: ComplexScalar, k: f64) -> Complex64 {
    (beta * Complex64::new(0.0, PI * k)).exp()
}

/// The jump matrix Ĵⱼ.
pub fn jump_matrix(ray: usize, beta: ComplexScalar) -> Result<Mat2> {
    check_ray(ray)?;
    let p = e_beta(beta, 1.0);
    let m = e_beta(beta, -1.0);
    Ok(match ray {
        1 => [[ZERO, m], [-p, ZERO]],
        2 | 6 => [[ONE, ZERO], [p, ONE]],
        3 | 5 => [[ONE, ZERO], [m, ONE]],
        _ => [[ZERO, p], [-m, ZERO]],
    })
}

/// Sector (1..=6) containing the direction `arg` (any real angle).
pub fn sector_of_arg(arg: f64) -> usize {
    let a = arg.rem_euclid(2.0 * PI);
    (1..=6).rev().find(|&k| a >= ray_angle(k)).unwrap_or(1)
}

/// A point strictly inside one of the six sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorPoint {
    /// The point.
    pub z: ComplexScalar,
    /// Sector index 1..=6.
    pub sector: usize,
}

impl SectorPoint {
    /// Locate `z`, rejecting points on a ray or outside 1e-3 ≤ |z| ≤ 25.
    pub fn new(z: ComplexScalar) -> Result<Self> {
        let sector = sector_of_arg(z.arg());
        Self::in_sector(z, sector)
    }

    /// Pair `z` with an asserted sector; a mismatch is an error.
    pub fn in_sector(z: ComplexScalar, sector: usize) -> Result<Self> {
        let r = z.norm();
        if !(MIN_RADIUS..=MAX_RADIUS).contains(&r) {
            return Err(Error::Domain { function: "chf", detail: format!("|z| = {r} not in [{MIN_RADIUS}, {MAX_RADIUS}]") });
        }
        let a = z.arg().rem_euclid(2.0 * PI);
        let on_ray = (1..=6).any(|k| {
            let d = (a - ray_angle(k)).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) < 1e-12
        });
        if on_ray || !(1..=6).contains(&sector) || sector_of_arg(a) != sector {
            return Err(Error::Domain { function: "chf", detail: format!("z = {z} is not strictly inside sector {sector}") });
        }
        Ok(Self { z, sector })
    }

    /// Argument of z continued counterclockwise from the positive axis,
    /// in [0, 2π).
    fn ccw_arg(&self) -> f64 {
        self.z.arg().rem_euclid(2.0 * PI)
    }
}

/// The ψ-function matrix of sector 1 times C₁, evaluated at |z| = r with an
/// explicitly continued argument `theta` (so ln z = ln r + iθ).
fn base_matrix(r: f64, theta: f64, beta: ComplexScalar) -> Result<Mat2> {
    let z = Complex64::from_polar(r, theta);
    let ln_r = r.ln();
    let zeta_p = z * Complex64::i();
    let zeta_m = -z * Complex64::i();
    let ln_p = Complex64::new(ln_r, theta + PI / 2.0);
    let ln_m = Complex64::new(ln_r, theta - PI / 2.0);
    let e_m = (-Complex64::i() * z / 2.0).exp();
    let e_p = (Complex64::i() * z / 2.0).exp();
    let ep1 = e_beta(beta, 1.0);
    let m11 = kummer_psi_b1_with_log(beta, zeta_p, ln_p)? * e_beta(beta, 2.0) * e_m;
    let m12 = -gamma(1.0 - beta)? * recip_gamma(beta) * kummer_psi_b1_with_log(1.0 - beta, zeta_m, ln_m)? * ep1 * e_p;
    let m21 = -gamma(1.0 + beta)? * recip_gamma(-beta) * kummer_psi_b1_with_log(1.0 + beta, zeta_p, ln_p)? * ep1 * e_m;
    let m22 = kummer_psi_b1_with_log(-beta, zeta_m, ln_m)? * e_p;
    let c11 = e_beta(beta, -1.5);
    let c22 = e_beta(beta, 0.5);
    let out = [[c11 * m11, c11 * m12], [c22 * m21, c22 * m22]];
    if out.iter().flatten().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NotFinite { what: "phi_chf" });
    }
    Ok(out)
}

/// Right factor taking sector 1 to sector k along the counterclockwise
/// path: crossing Σ̂ⱼ multiplies by Ĵⱼ (outward ray) or Ĵⱼ⁻¹ (inward ray).
fn ccw_factor(sector: usize, beta: ComplexScalar) -> Result<Mat2> {
    let mut g = [[ONE, ZERO], [ZERO, ONE]];
    for ray in 2..=sector {
        let j = jump_matrix(ray, beta)?;
        g = mat2_mul(&g, &if ray_outward(ray) { j } else { mat2_inv(&j) });
    }
    Ok(g)
}

/// Right factor taking sector 1 to sector k along the clockwise path,
/// crossing Σ̂₁, Σ̂₆, … in turn.
fn cw_factor(sector: usize, beta: ComplexScalar) -> Result<Mat2> {
    let mut g = [[ONE, ZERO], [ZERO, ONE]];
    // Leaving sector k clockwise crosses Σ̂ₖ into sector k − 1 (6 after 1).
    let mut current = 1;
    while current != sector {
        let j = jump_matrix(current, beta)?;
        g = mat2_mul(&g, &if ray_outward(current) { mat2_inv(&j) } else { j });
        current = if current == 1 { 6 } else { current - 1 };
    }
    Ok(g)
}

/// Φ(z; β) at a point inside a sector, continued counterclockwise from
/// sector 1.
pub fn phi_chf(pt: SectorPoint, beta: ComplexScalar) -> Result<Mat2> {
    check_beta(beta)?;
    let checked = SectorPoint::in_sector(pt.z, pt.sector)?;
    let base = base_matrix(checked.z.norm(), checked.ccw_arg(), beta)?;
    Ok(mat2_mul(&base, &ccw_factor(checked.sector, beta)?))
}

/// ‖Φ₊ − Φ₋Ĵⱼ‖ (entrywise max modulus) at z = r·e^{iθⱼ}.
///
/// Both boundary values are the sector formulas continued onto the ray.
/// The sector clockwise of Σ̂ⱼ is reached counterclockwise from sector 1
/// and the sector counterclockwise of Σ̂ⱼ is reached clockwise, so every
/// residual exercises the full monodromy of the ψ-functions around the
/// origin rather than a relation that holds by construction.
pub fn chf_jump_residual(ray: usize, r: f64, beta: ComplexScalar) -> Result<f64> {
    check_ray(ray)?;
    check_beta(beta)?;
    if !(0.1..=10.0).contains(&r) {
        return Err(Error::Domain { function: "chf_jump_residual", detail: format!("r = {r} not in [0.1, 10]") });
    }
    let theta = if ray == 1 { 2.0 * PI } else { ray_angle(ray) };
    let before = if ray == 1 { 6 } else { ray - 1 };
    let cw_side = mat2_mul(&base_matrix(r, theta, beta)?, &ccw_factor(before, beta)?);
    let ccw_side = mat2_mul(&base_matrix(r, theta - 2.0 * PI, beta)?, &cw_factor(ray, beta)?);
    let j = jump_matrix(ray, beta)?;
    // For an outward ray the + side is counterclockwise of it.
    let (plus, minus) = if ray_outward(ray) { (ccw_side, cw_side) } else { (cw_side, ccw_side) };
    Ok(mat2_max_diff(&plus, &mat2_mul(&minus, &j)))
}

/// Closed-form coefficients of the expansion at the origin in sector 2:
/// Φ(z)e^{−βπiσ₃/2} = Υ₀(I + Υ₁z + O(z²))·[[1, −γ/(2πi)·ln(e^{−πi/2}z)], [0, 1]],
/// γ = 1 − e^{2βπi}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChfExpansion {
    /// Υ₀.
    pub upsilon0: Mat2,
    /// (Υ₁)₂₁.
    pub upsilon1_21: ComplexScalar,
}

/// Numerical confirmation of [`ChfExpansion`] from samples of Φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCheck {
    /// The closed forms.
    pub closed: ChfExpansion,
    /// Υ₀ recovered by Cauchy integration of the log-stripped Φ.
    pub upsilon0_numeric: Mat2,
    /// Υ₁ recovered the same way (all four entries).
    pub upsilon1_numeric: Mat2,
    /// max |Υ₀ − Υ₀(numeric)|.
    pub upsilon0_error: f64,
    /// |(Υ₁)₂₁ − (Υ₁)₂₁(numeric)|.
    pub upsilon1_21_error: f64,
    /// First-order remainders ‖E(z) − Υ₀(I + Υ₁z)‖ at z = 1e-2·e^{3πi/4}
    /// and 5e-3·e^{3πi/4}.
    pub remainders: [f64; 2],
}

/// Coefficient −γ/(2πi) of the logarithm in the unipotent factor.
pub fn log_coefficient(beta: ComplexScalar) -> ComplexScalar {
    let gamma_thin = 1.0 - e_beta(beta, 2.0);
    -gamma_thin / Complex64::new(0.0, 2.0 * PI)
}

/// Υ₀ and (Υ₁)₂₁ in closed form.
pub fn chf_origin_expansion(beta: ComplexScalar) -> Result<ChfExpansion> {
    check_beta(beta)?;
    if beta.norm() == 0.0 {
        return Err(Error::Degenerate { what: "chf_origin_expansion", detail: "beta = 0".into() });
    }
    let two_ge = 2.0 * EULER_GAMMA;
    let upsilon0 = [
        [gamma(1.0 - beta)? * e_beta(beta, -1.0), recip_gamma(beta) * (digamma(1.0 - beta)? + two_ge)],
        [gamma(1.0 + beta)?, -e_beta(beta, 1.0) * recip_gamma(-beta) * (digamma(-beta)? + two_ge)],
    ];
    let upsilon1_21 = beta * Complex64::new(0.0, PI) * e_beta(beta, -1.0) / (beta * PI).sin();
    if mat2_det(&upsilon0).norm() == 0.0 {
        return Err(Error::Singular { what: "chf_origin_expansion" });
    }
    Ok(ChfExpansion { upsilon0, upsilon1_21 })
}

/// The analytic factor E(z) = Φ(z)e^{−βπiσ₃/2}·U(z)⁻¹ in sector 2, with the
/// sector-2 formula continued to the argument `theta`.
fn log_stripped(r: f64, theta: f64, beta: ComplexScalar) -> Result<Mat2> {
    let phi = mat2_mul(&base_matrix(r, theta, beta)?, &ccw_factor(2, beta)?);
    let d = [[e_beta(beta, -0.5), ZERO], [ZERO, e_beta(beta, 0.5)]];
    let ln = Complex64::new(r.ln(), theta - PI / 2.0);
    let u_inv = [[ONE, -log_coefficient(beta) * ln], [ZERO, ONE]];
    Ok(mat2_mul(&mat2_mul(&phi, &d), &u_inv))
}

/// Verify [`chf_origin_expansion`] against Φ itself: E(z) is analytic at the
/// origin, so its Taylor coefficients follow from the trapezoidal rule on
/// a circle; the closed forms are compared with them and the first-order
/// remainder is sampled on arg z = 3π/4.
pub fn chf_expansion_check(beta: ComplexScalar) -> Result<ExpansionCheck> {
    let closed = chf_origin_expansion(beta)?;
    const N: usize = 64;
    const RADIUS: f64 = 0.25;
    let centre = 3.0 * PI / 4.0;
    let samples: Vec<(f64, Mat2)> = (0..N)
        .into_par_iter()
        .map(|k| {
            let t = centre - PI + 2.0 * PI * k as f64 / N as f64;
            log_stripped(RADIUS, t, beta).map(|e| (t, e))
        })
        .collect::<Result<_>>()?;
    let mut a0 = [[ZERO; 2]; 2];
    let mut a1 = [[ZERO; 2]; 2];
    for (t, e) in &samples {
        let w1 = Complex64::from_polar(1.0 / (RADIUS * N as f64), -t);
        for i in 0..2 {
            for j in 0..2 {
                a0[i][j] += e[i][j] / N as f64;
                a1[i][j] += e[i][j] * w1;
            }
        }
    }
    let upsilon1 = mat2_mul(&mat2_inv(&a0), &a1);
    let mut remainders = [0.0; 2];
    for (slot, r) in remainders.iter_mut().zip([1e-2, 5e-3]) {
        let z = Complex64::from_polar(r, centre);
        let e = log_stripped(r, centre, beta)?;
        let lin = [[ONE + upsilon1[0][0] * z, upsilon1[0][1] * z], [upsilon1[1][0] * z, ONE + upsilon1[1][1] * z]];
        *slot = mat2_max_diff(&e, &mat2_mul(&closed.upsilon0, &lin));
    }
    Ok(ExpansionCheck {
        closed,
        upsilon0_numeric: a0,
        upsilon1_numeric: upsilon1,
        upsilon0_error: mat2_max_diff(&closed.upsilon0, &a0),
        upsilon1_21_error: (closed.upsilon1_21 - upsilon1[1][0]).norm(),
        remainders,
    })
}

/// One row of the jump-residual table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayResidual {
    /// Ray index.
    pub ray: usize,
    /// Distance from the origin.
    pub r: f64,
    /// ‖Φ₊ − Φ₋Ĵ‖.
    pub residual: f64,
}

/// Full verification of the parametrix for one β.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChfReport {
    /// β (imaginary part; the real part is zero).
    pub beta_im: f64,
    /// Jump residuals on every ray at r ∈ {0.5, 1, 2, 5}.
    pub rays: Vec<RayResidual>,
    /// Largest jump residual.
    pub max_ray_residual: f64,
    /// |det Φ(1+i) − det Φ(2+2i)|.
    pub det_constancy: f64,
    /// max entry of Φe^{(iz/2)σ₃}z^{βσ₃} − I at z = 25i.
    pub infinity_normalisation: f64,
    /// |−γ/(2πi) − e^{βπi}sin(βπ)/π|.
    pub gamma_beta_identity: f64,
    /// Origin-expansion check (absent at β = 0, where it degenerates).
    pub expansion: Option<ExpansionCheck>,
}

/// Radii used by [`chf_report`].
pub const REPORT_RADII: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// max |Φe^{(iz/2)σ₃}z^{βσ₃} − I| at `z` (upper half-plane).
pub fn infinity_normalisation(z: ComplexScalar, beta: ComplexScalar) -> Result<f64> {
    let phi = phi_chf(SectorPoint::new(z)?, beta)?;
    let zb = (beta * z.ln()).exp();
    let ez = (Complex64::i() * z / 2.0).exp();
    let right = [[ez * zb, ZERO], [ZERO, 1.0 / (ez * zb)]];
    Ok(mat2_max_diff(&mat2_mul(&phi, &right), &[[ONE, ZERO], [ZERO, ONE]]))
}

/// |det Φ(z₁) − det Φ(z₂)|.
pub fn det_constancy(z1: ComplexScalar, z2: ComplexScalar, beta: ComplexScalar) -> Result<f64> {
    let d1 = mat2_det(&phi_chf(SectorPoint::new(z1)?, beta)?);
    let d2 = mat2_det(&phi_chf(SectorPoint::new(z2)?, beta)?);
    Ok((d1 - d2).norm())
}

/// Run every check for β = i·`beta_im`.
pub fn chf_report(beta_im: f64) -> Result<ChfReport> {
    let beta = Complex64::new(0.0, beta_im);
    check_beta(beta)?;
    let grid: Vec<(usize, f64)> = (1..=6).flat_map(|ray| REPORT_RADII.iter().map(move |&r| (ray, r))).collect();
    let rays: Vec<RayResidual> = grid
        .into_par_iter()
        .map(|(ray, r)| chf_jump_residual(ray, r, beta).map(|residual| RayResidual { ray, r, residual }))
        .collect::<Result<_>>()?;
    let max_ray_residual = rays.iter().map(|r| r.residual).fold(0.0, f64::max);
    let det = det_constancy(Complex64::new(1.0, 1.0), Complex64::new(2.0, 2.0), beta)?;
    let inf = infinity_normalisation(Complex64::new(0.0, MAX_RADIUS), beta)?;
    let gb = (log_coefficient(beta) - e_beta(beta, 1.0) * (beta * PI).sin() / PI).norm();
    let expansion = if beta_im == 0.0 { None } else { Some(chf_expansion_check(beta)?) };
    Ok(ChfReport { beta_im, rays, max_ray_residual, det_constancy: det, infinity_normalisation: inf, gamma_beta_identity: gb, expansion })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(im: f64) -> Complex64 {
        Complex64::new(0.0, im)
    }

    #[test]
    fn beta_zero_is_diagonal_exponential() {
        let z = Complex64::new(0.7, 0.2);
        let phi = phi_chf(SectorPoint::new(z).unwrap(), b(0.0)).unwrap();
        let want = [[(-Complex64::i() * z / 2.0).exp(), ZERO], [ZERO, (Complex64::i() * z / 2.0).exp()]];
        assert!(mat2_max_diff(&phi, &want) < 1e-14);
    }

    #[test]
    fn determinant_is_constant() {
        assert!(det_constancy(Complex64::new(1.0, 1.0), Complex64::new(2.0, 2.0), b(0.11)).unwrap() < 1e-9);
        assert!(det_constancy(Complex64::new(0.3, -1.0), Complex64::new(-2.0, 0.4), b(0.3)).unwrap() < 1e-9);
    }

    #[test]
    fn jumps_hold_on_every_ray() {
        for beta in [0.05, 0.11, 0.3, -0.2] {
            for ray in 1..=6 {
                for r in REPORT_RADII {
                    let res = chf_jump_residual(ray, r, b(beta)).unwrap();
                    assert!(res < 1e-9, "ray {ray}, r {r}, beta {beta}: {res}");
                }
            }
        }
    }

    #[test]
    fn spec_jump_examples() {
        assert!(chf_jump_residual(1, 2.0, b(0.11)).unwrap() < 1e-9);
        assert!(chf_jump_residual(4, 1.0, b(0.2)).unwrap() < 1e-9);
        for ray in [2, 3, 5, 6] {
            assert!(chf_jump_residual(ray, 1.0, b(0.0)).unwrap() < 1e-13);
        }
    }

    #[test]
    fn normalised_at_infinity() {
        let e = infinity_normalisation(Complex64::new(0.0, 25.0), b(0.05)).unwrap();
        assert!(e < 5e-3, "{e}");
    }

    #[test]
    fn normalisation_error_decays_like_inverse_z() {
        // The deviation from I is a genuine O(1/z) term: |z|·error settles.
        let scaled = |r: f64| r * infinity_normalisation(Complex64::new(0.0, r), b(0.11)).unwrap();
        let (a, c) = (scaled(20.0), scaled(25.0));
        assert!((a - c).abs() < 0.03 * c, "{a} {c}");
    }

    #[test]
    fn origin_expansion_matches_closed_form() {
        for beta in [0.05, 0.11, 0.3] {
            let c = chf_expansion_check(b(beta)).unwrap();
            assert!(c.upsilon0_error < 1e-12, "{beta}: {}", c.upsilon0_error);
            assert!(c.upsilon1_21_error < 1e-10, "{beta}: {}", c.upsilon1_21_error);
            assert!(c.remainders[1] < 1e-4, "{beta}: {:?}", c.remainders);
            // Second-order remainder: halving z divides it by about four.
            let ratio = c.remainders[0] / c.remainders[1];
            assert!((3.0..5.0).contains(&ratio), "{beta}: {ratio}");
        }
    }

    #[test]
    fn upsilon0_11_closed_form() {
        let beta = b(0.11);
        let e = chf_origin_expansion(beta).unwrap();
        let direct = gamma(1.0 - beta).unwrap() * (-beta * Complex64::new(0.0, PI)).exp();
        assert!((e.upsilon0[0][0] - direct).norm() < 1e-12);
    }

    #[test]
    fn gamma_beta_identity() {
        for beta in [0.05, 0.11, 0.3] {
            let r = chf_report(beta).unwrap();
            assert!(r.gamma_beta_identity < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(chf_origin_expansion(b(0.0)).is_err());
        assert!(phi_chf(SectorPoint { z: Complex64::new(1.0, 0.01), sector: 3 }, b(0.1)).is_err());
        assert!(SectorPoint::new(Complex64::new(2.0, 0.0)).is_err());
        assert!(SectorPoint::new(Complex64::new(30.0, 1.0)).is_err());
        assert!(phi_chf(SectorPoint::new(Complex64::new(1.0, 1.0)).unwrap(), Complex64::new(0.1, 0.0)).is_err());
    }
}
