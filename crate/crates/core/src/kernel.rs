//! The Pearcey kernel K(x, y; ρ) in three independent representations.
//!
//! * [`kernel_rational`] — the production path built from P, Q and their
//!   derivatives, divided by `x − y`;
//! * [`kernel_diagonal_band`] — a Taylor expansion of the same expression
//!   about the diagonal, used when `|x − y| < 1e-3`;
//! * [`kernel_integral`] — a double contour integral used as a test oracle;
//! * [`kernel_rh`] — the 3×3 matrix form built from Ψ̃, also an oracle.

use crate::error::{Error, Result};
use crate::linalg::{solve_complex, Matrix};
use crate::pearcey_fn::{pearcey_p, pearcey_q, tilde_psi, PearceyValues};
use crate::quadrature::{composite_panels, ray_cutoff, PANEL_WIDTH};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};

/// Half-width of the band around the diagonal handled by Taylor expansion.
pub const DIAGONAL_BAND: f64 = 1e-3;
/// Number of Taylor terms in the band expansion.
const BAND_TERMS: usize = 6;
/// Relative tolerance for the realness check of the complex oracles.
const REAL_TOL: f64 = 1e-9;

/// Numerator N(x, y) = P(x)Q″(y) − P′(x)Q′(y) + P″(x)Q(y) − ρP(x)Q(y).
pub fn kernel_numerator(p: &PearceyValues, q: &PearceyValues, rho: f64) -> f64 {
    let [p0, p1, p2] = p.real();
    let [q0, q1, q2] = q.real();
    p0 * q2 - p1 * q1 + p2 * q0 - rho * p0 * q0
}

/// Off-diagonal kernel value from precomputed P(x) and Q(y).
pub fn kernel_rational_from_values(x: f64, y: f64, rho: f64, p: &PearceyValues, q: &PearceyValues) -> Result<f64> {
    let gap = (x - y).abs();
    if gap < DIAGONAL_BAND {
        return Err(Error::NearDiagonal { gap });
    }
    Ok(kernel_numerator(p, q, rho) / (x - y))
}

/// K(x, y; ρ) = N(x, y)/(x − y) for `|x − y| ≥ 1e-3`.
pub fn kernel_rational(x: f64, y: f64, rho: f64) -> Result<f64> {
    let gap = (x - y).abs();
    if gap < DIAGONAL_BAND {
        return Err(Error::NearDiagonal { gap });
    }
    kernel_rational_from_values(x, y, rho, &pearcey_p(x, rho)?, &pearcey_q(y, rho)?)
}

/// Exact diagonal K(x, x) = xPQ + P′Q″ − P″Q′ from values at `x`.
pub fn kernel_diagonal_from_values(x: f64, p: &PearceyValues, q: &PearceyValues) -> f64 {
    let [p0, p1, p2] = p.real();
    let [q0, q1, q2] = q.real();
    x * p0 * q0 + p1 * q2 - p2 * q1
}

/// Band value K(x, y) for `|y − x|` small, using P and Q at the expansion
/// point `x` only.
///
/// Since N(x, x) = 0, K = −Σ_{m≥1} ∂ᵐ_yN(x, x)(y − x)^{m−1}/m!, where
/// ∂ᵐ_yN(x, x) = PQ^{(m+2)} − P′Q^{(m+1)} + P″Q^{(m)} − ρPQ^{(m)} and the
/// higher derivatives of Q follow from differentiating its ODE:
/// Q^{(k+3)} = −xQ^{(k)} − kQ^{(k−1)} + ρQ^{(k+1)}.
pub fn kernel_band_from_values(x: f64, y: f64, rho: f64, p: &PearceyValues, q: &PearceyValues) -> f64 {
    let [p0, p1, p2] = p.real();
    let mut qd = [0.0; BAND_TERMS + 3];
    let [q0, q1, q2] = q.real();
    qd[0] = q0;
    qd[1] = q1;
    qd[2] = q2;
    for k in 0..BAND_TERMS {
        let prev = if k == 0 { 0.0 } else { qd[k - 1] };
        qd[k + 3] = -x * qd[k] - k as f64 * prev + rho * qd[k + 1];
    }
    let h = y - x;
    let mut sum = 0.0;
    let mut hpow = 1.0;
    let mut fact = 1.0;
    for m in 1..=BAND_TERMS {
        fact *= m as f64;
        let d = p0 * qd[m + 2] - p1 * qd[m + 1] + p2 * qd[m] - rho * p0 * qd[m];
        sum -= d * hpow / fact;
        hpow *= h;
    }
    sum
}

/// K(x, y; ρ) for `|x − y| < 1e-3` by Taylor expansion about `x`.
pub fn kernel_diagonal_band(x: f64, y: f64, rho: f64) -> Result<f64> {
    let p = pearcey_p(x, rho)?;
    let q = pearcey_q(x, rho)?;
    Ok(kernel_band_from_values(x, y, rho, &p, &q))
}

/// K(x, y; ρ) choosing the rational or band branch automatically.
pub fn kernel(x: f64, y: f64, rho: f64) -> Result<f64> {
    if (x - y).abs() < DIAGONAL_BAND {
        kernel_diagonal_band(x, y, rho)
    } else {
        kernel_rational(x, y, rho)
    }
}

/// Double contour integral representation of the kernel:
///
/// K(x, y) = −(i/4π²) ∫_Σ' dt ∫_ℝ ds e^{−s⁴/4 − ρs²/2 + isx} e^{t⁴/4 + ρt²/2 + ity}/(s + t),
///
/// where Σ' is Σ (the four rays of Q) translated to start at ±i, so that
/// s + t never vanishes. The s-integral is truncated where the integrand
/// falls below e⁻⁴⁵ and the rays are followed to length `ray_len`.
fn kernel_double_contour(x: f64, y: f64, rho: f64, ray_len: f64) -> Result<f64> {
    let t_max = ray_cutoff(-rho / 2.0, 0.0);
    let (s, ws) = composite_panels(-t_max, t_max, PANEL_WIDTH);
    let a: Vec<Complex64> = s
        .iter()
        .zip(&ws)
        .map(|(si, wi)| (Complex64::new(-si.powi(4) / 4.0 - rho * si * si / 2.0, si * x)).exp() * *wi)
        .collect();
    let rays: [(Complex64, f64, f64); 4] = [
        (Complex64::i(), FRAC_PI_4, -1.0),
        (Complex64::i(), 3.0 * FRAC_PI_4, 1.0),
        (-Complex64::i(), 5.0 * FRAC_PI_4, -1.0),
        (-Complex64::i(), 7.0 * FRAC_PI_4, 1.0),
    ];
    let (r, wr) = composite_panels(0.0, ray_len, PANEL_WIDTH);
    let total: Complex64 = rays
        .par_iter()
        .map(|&(vertex, theta, orient)| {
            let e = Complex64::from_polar(1.0, theta);
            let mut acc = Complex64::new(0.0, 0.0);
            for (ri, wi) in r.iter().zip(&wr) {
                let t = vertex + e * *ri;
                let t2 = t * t;
                let b = (t2 * t2 / 4.0 + rho * t2 / 2.0 + Complex64::i() * t * y).exp() * e * (orient * wi);
                let inner: Complex64 = s.iter().zip(&a).map(|(si, ai)| *ai / (t + *si)).sum();
                acc += b * inner;
            }
            acc
        })
        .sum();
    let k = -Complex64::i() / (4.0 * PI * PI) * total;
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::NotFinite { what: "kernel_integral" });
    }
    if k.im.abs() > REAL_TOL * (1.0 + k.re.abs()) {
        return Err(Error::ImaginaryResidue { what: "kernel_integral", im: k.im });
    }
    Ok(k.re)
}

/// Oracle: the kernel as a double contour integral (valid on and off the
/// diagonal). The ray length is doubled from 8 until the value is stable to
/// 1e-11.
pub fn kernel_integral(x: f64, y: f64, rho: f64) -> Result<f64> {
    if x.abs() > 12.0 || y.abs() > 12.0 {
        return Err(Error::Domain { function: "kernel_integral", detail: "|x|, |y| must be <= 12".into() });
    }
    let mut len = 8.0;
    let mut prev = kernel_double_contour(x, y, rho, len)?;
    for _ in 0..3 {
        len *= 1.5;
        let next = kernel_double_contour(x, y, rho, len)?;
        if (next - prev).abs() < 1e-11 * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { what: "kernel_integral", detail: format!("ray length {len}") })
}

/// Oracle: K = (0 1 1)·Ψ̃(y)⁻¹Ψ̃(x)·(1 0 0)ᵀ / (2πi(x − y)).
pub fn kernel_rh(x: f64, y: f64, rho: f64) -> Result<f64> {
    if x == y {
        return Err(Error::Domain { function: "kernel_rh", detail: "x must differ from y".into() });
    }
    if x.abs() > 12.0 || y.abs() > 12.0 {
        return Err(Error::Domain { function: "kernel_rh", detail: "|x|, |y| must be <= 12".into() });
    }
    let k = kernel_rh_complex(&tilde_psi(x, rho)?.flat(), &tilde_psi(y, rho)?.flat(), x, y)?;
    if k.im.abs() > REAL_TOL * (1.0 + k.re.abs()) {
        return Err(Error::ImaginaryResidue { what: "kernel_rh", im: k.im });
    }
    Ok(k.re)
}

/// The complex RH expression from row-major Ψ̃(x) and Ψ̃(y).
pub fn kernel_rh_complex(psi_x: &[Complex64], psi_y: &[Complex64], x: f64, y: f64) -> Result<Complex64> {
    let rhs = [psi_x[0], psi_x[3], psi_x[6]];
    let v = solve_complex(psi_y, &rhs).map_err(|_| Error::Singular { what: "kernel_rh" })?;
    Ok((v[1] + v[2]) / (Complex64::new(0.0, 2.0 * PI) * (x - y)))
}

/// P and Q values precomputed at a set of nodes, from which kernel
/// matrices are assembled without further integral evaluations.
#[derive(Debug, Clone)]
pub struct KernelSession {
    /// Parameter ρ.
    pub rho: f64,
    /// Nodes.
    pub nodes: Vec<f64>,
    /// P at the nodes.
    pub p: Vec<PearceyValues>,
    /// Q at the nodes.
    pub q: Vec<PearceyValues>,
}

impl KernelSession {
    /// Evaluate P and Q at every node (in parallel).
    pub fn new(rho: f64, nodes: &[f64]) -> Result<Self> {
        let pq: Vec<(PearceyValues, PearceyValues)> =
            nodes.par_iter().map(|&x| Ok((pearcey_p(x, rho)?, pearcey_q(x, rho)?))).collect::<Result<_>>()?;
        let (p, q) = pq.into_iter().unzip();
        Ok(Self { rho, nodes: nodes.to_vec(), p, q })
    }

    /// K(xᵢ, xⱼ) with the band branch for near-diagonal pairs.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let (x, y) = (self.nodes[i], self.nodes[j]);
        if (x - y).abs() < DIAGONAL_BAND {
            kernel_band_from_values(x, y, self.rho, &self.p[i], &self.q[i])
        } else {
            kernel_numerator(&self.p[i], &self.q[j], self.rho) / (x - y)
        }
    }

    /// Dense kernel matrix Kᵢⱼ = K(xᵢ, xⱼ), rows assembled in parallel.
    pub fn matrix(&self) -> Result<Matrix> {
        let n = self.nodes.len();
        let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect();
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        crate::error::ensure_finite("kernel matrix", &data)?;
        Ok(Matrix::from_row_major(n, data))
    }

    /// K(u, xⱼ) for an arbitrary u, given P(u) and Q(u).
    pub fn row_at(&self, u: f64, pu: &PearceyValues, qu: &PearceyValues) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.q)
            .map(|(&y, qy)| {
                if (u - y).abs() < DIAGONAL_BAND {
                    kernel_band_from_values(u, y, self.rho, pu, qu)
                } else {
                    kernel_numerator(pu, qy, self.rho) / (u - y)
                }
            })
            .collect()
    }

    /// K(xᵢ, v) for an arbitrary v, given Q(v).
    pub fn column_at(&self, v: f64, qv: &PearceyValues) -> Vec<f64> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if (x - v).abs() < DIAGONAL_BAND {
                    kernel_band_from_values(x, v, self.rho, &self.p[i], &self.q[i])
                } else {
                    kernel_numerator(&self.p[i], qv, self.rho) / (x - v)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerator_vanishes_on_diagonal() {
        for x in [0.0, 1.0, -2.0] {
            let p = pearcey_p(x, 0.0).unwrap();
            let q = pearcey_q(x, 0.0).unwrap();
            assert!(kernel_numerator(&p, &q, 0.0).abs() < 1e-10);
        }
    }

    #[test]
    fn near_diagonal_is_rejected_by_rational_form() {
        assert!(matches!(kernel_rational(1.0, 1.0005, 0.0), Err(Error::NearDiagonal { .. })));
    }

    #[test]
    fn band_matches_exact_diagonal_at_zero_offset() {
        let p = pearcey_p(0.7, 0.5).unwrap();
        let q = pearcey_q(0.7, 0.5).unwrap();
        let band = kernel_band_from_values(0.7, 0.7, 0.5, &p, &q);
        assert!((band - kernel_diagonal_from_values(0.7, &p, &q)).abs() < 1e-14);
    }

    #[test]
    fn band_and_rational_agree_across_switch() {
        let x = 1.0;
        let r = kernel_rational(x, x + 2e-3, 0.0).unwrap();
        let b = kernel_diagonal_band(x, x + 2e-3, 0.0).unwrap();
        assert!((r - b).abs() < 1e-9, "{r} {b}");
        let vals: Vec<f64> = [0.5e-3, 1e-3 - 1e-12, 1.5e-3, 2e-3]
            .iter()
            .map(|h| kernel(x, x + h, 0.0).unwrap())
            .collect();
        let second = vals[0] - 2.0 * vals[1] + vals[2];
        assert!(second.abs() < 1e-6);
    }

    #[test]
    fn rh_form_agrees_with_rational() {
        let r = kernel_rational(2.0, 0.5, 1.0).unwrap();
        let h = kernel_rh(2.0, 0.5, 1.0).unwrap();
        assert!((r - h).abs() < 1e-8, "{r} {h}");
    }

    #[test]
    fn session_matrix_matches_pointwise_kernel() {
        let nodes = [-1.0, 0.2, 0.2005, 1.5];
        let sess = KernelSession::new(0.3, &nodes).unwrap();
        let m = sess.matrix().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let k = kernel(nodes[i], nodes[j], 0.3).unwrap();
                assert!((m[(i, j)] - k).abs() < 1e-12, "{i} {j}");
            }
        }
    }
}
