//! The end-to-end acceptance suite: twelve numerical criteria tying the
//! library's independent computations to each other and to the closed-form
//! asymptotics. Shared by the `acceptance` test target and the command-line
//! `selftest`.

use crate::asymptotics::{clt_distance_with, counting_stats, f_large_gap, fit_gamma1_constant, h_large_s, h_large_s_smooth};
use crate::chf::chf_report;
use crate::error::{Error, Result};
use crate::fredholm::{fredholm_logdet, logdet_converged, moments_mgf_with, moments_trace_with, resolvent_boundary_trace, Discretisation};
use crate::hamiltonian::{coupled_p0q0_residual, identity_report, integral_representation_check_with, solve_trajectory, SweepOptions, Trajectory};
use crate::kernel::{kernel_integral, kernel_rational, kernel_rh};
use crate::pearcey_fn::{p_third, pearcey_p, pearcey_p_third_direct, pearcey_q, pearcey_q_third_direct, q_third, ModelParams};
use crate::specfun::{barnes_ln_g, gamma, kummer_phi, kummer_psi_b1, ln_gamma, EULER_GAMMA};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// Number of criteria.
pub const CRITERIA: usize = 12;

/// Criteria whose stated thresholds the mathematics does not meet, with
/// the reason. They are still run and reported as failures; harnesses use
/// this list to tell an expected failure from a regression.
pub const KNOWN_FAILURES: &[(usize, &str)] = &[(
    5,
    "F - f_large_gap oscillates (period ~ 2 in s at gamma = 0.5) under a decaying envelope, \
     so e(s) sampled at s = 4, 6, 8, 10 is not monotone: e(10) exceeds e(8) by 0.6%",
)];

/// Whether `outcomes` contain no failure outside [`KNOWN_FAILURES`].
pub fn only_known_failures(outcomes: &[CriterionOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed || KNOWN_FAILURES.iter().any(|(id, _)| *id == o.id))
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    /// Criterion number, 1..=12.
    pub id: usize,
    /// Short name.
    pub name: &'static str,
    /// Whether every check passed.
    pub passed: bool,
    /// Measured quantities against their thresholds.
    pub detail: String,
    /// Wall-clock time in seconds.
    pub seconds: f64,
    /// Wall-clock budget in seconds, if the criterion has one.
    pub budget_seconds: Option<f64>,
}

impl CriterionOutcome {
    /// One summary line: `[PASS] 3 determinant sanity (0.12 s): …`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Name of criterion `id`.
pub fn criterion_name(id: usize) -> &'static str {
    [
        "kernel triple agreement",
        "Pearcey ODE residuals",
        "determinant sanity",
        "resolvent identity",
        "large-gap law with constant",
        "H large-s asymptotics",
        "ODE trajectory suite",
        "integral representation",
        "counting statistics",
        "gamma = 1 constant",
        "CHF parametrix",
        "special functions",
    ][id - 1]
}

fn budget(id: usize) -> Option<f64> {
    match id {
        1 => Some(120.0),
        5 => Some(600.0),
        _ => None,
    }
}

/// Collects named checks and renders them into a detail string.
struct Checks {
    parts: Vec<String>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Self { parts: Vec::new(), ok: true }
    }

    /// Record `value ≤ limit`.
    fn le(&mut self, what: &str, value: f64, limit: f64) {
        let pass = value <= limit;
        self.ok &= pass;
        self.parts.push(format!("{what} = {value:.3e} {} {limit:.1e}", if pass { "<=" } else { "> !" }));
    }

    /// Record a boolean condition with a description.
    fn holds(&mut self, what: String, pass: bool) {
        self.ok &= pass;
        self.parts.push(if pass { what } else { format!("{what} !") });
    }

    fn finish(self) -> (bool, String) {
        (self.ok, self.parts.join("; "))
    }
}

fn params(g: f64, r: f64) -> Result<ModelParams> {
    ModelParams::new(g, r)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", items.join(", "))
}

/// 1. Rational, double-contour and RH kernels agree on a 9×9 grid.
fn kernel_triple() -> Result<(bool, String)> {
    let xs = linspace(-3.0, 3.0, 9);
    let mut pts = Vec::new();
    for rho in [-1.0, 0.0, 1.0] {
        for &x in &xs {
            for &y in &xs {
                if x != y {
                    pts.push((x, y, rho));
                }
            }
        }
    }
    let diffs: Vec<f64> = pts
        .par_iter()
        .map(|&(x, y, rho)| {
            let a = kernel_rational(x, y, rho)?;
            let b = kernel_integral(x, y, rho)?;
            let c = kernel_rh(x, y, rho)?;
            Ok((a - b).abs().max((a - c).abs()).max((b - c).abs()))
        })
        .collect::<Result<_>>()?;
    let mut ch = Checks::new();
    ch.le(&format!("max pairwise difference over {} points", pts.len()), diffs.iter().cloned().fold(0.0, f64::max), 1e-7);
    Ok(ch.finish())
}

/// |direct − ODE| third derivative relative to the largest ODE term (at
/// least 1).
fn ode_residual(direct: f64, ode: f64, terms: [f64; 2]) -> f64 {
    (direct - ode).abs() / terms[0].abs().max(terms[1].abs()).max(direct.abs()).max(1.0)
}

/// 2. P‴ = xP + ρP′ and Q‴ = −yQ + ρQ′ on [−10, 10], with the third
/// derivatives from their own integral representations.
fn pearcey_odes() -> Result<(bool, String)> {
    let xs = linspace(-10.0, 10.0, 81);
    let mut jobs = Vec::new();
    for rho in [-1.0, 0.0, 1.0] {
        for &x in &xs {
            jobs.push((x, rho));
        }
    }
    let res: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(x, rho)| {
            let p = pearcey_p(x, rho)?;
            let q = pearcey_q(x, rho)?;
            let rp = ode_residual(pearcey_p_third_direct(x, rho)?, p_third(x, rho, &p), [x * p.v0.0, rho * p.v1.0]);
            let rq = ode_residual(pearcey_q_third_direct(x, rho)?, q_third(x, rho, &q), [x * q.v0.0, rho * q.v1.0]);
            Ok((rp, rq))
        })
        .collect::<Result<_>>()?;
    let mut ch = Checks::new();
    ch.le("max P residual", res.iter().map(|r| r.0).fold(0.0, f64::max), 1e-7);
    ch.le("max Q residual", res.iter().map(|r| r.1).fold(0.0, f64::max), 1e-7);
    Ok(ch.finish())
}

/// 3. F vanishes at γ = 0, is real, negative and decreasing, and the
/// Nyström rule has converged at n = 128.
fn determinant_sanity() -> Result<(bool, String)> {
    let mut ch = Checks::new();
    let mut zero: f64 = 0.0;
    for rho in [-1.0, 0.0, 1.0] {
        for s in [1.0, 3.0, 6.0] {
            zero = zero.max(fredholm_logdet(s, params(0.0, rho)?, 64)?.f.abs());
        }
    }
    ch.le("max |F(s; 0, rho)|", zero, f64::EPSILON);
    let fs: Vec<f64> = [1.0, 2.0, 4.0, 6.0].iter().map(|&s| Ok(fredholm_logdet(s, params(0.5, 0.0)?, 128)?.f)).collect::<Result<_>>()?;
    ch.holds(format!("F(s = 1, 2, 4, 6) = {} negative and decreasing", fmt_list(&fs)), fs[0] < 0.0 && strictly_decreasing(&fs));
    let fg: Vec<f64> = [0.2, 0.5, 0.8].iter().map(|&g| Ok(fredholm_logdet(3.0, params(g, 0.0)?, 128)?.f)).collect::<Result<_>>()?;
    ch.holds(format!("F(3; gamma = 0.2, 0.5, 0.8) = {} decreasing", fmt_list(&fg)), strictly_decreasing(&fg));
    let mut doubling: f64 = 0.0;
    for rho in [0.0, 1.0] {
        for s in [2.0, 4.0, 6.0] {
            let p = params(0.5, rho)?;
            doubling = doubling.max((fredholm_logdet(s, p, 128)?.f - fredholm_logdet(s, p, 64)?.f).abs());
        }
    }
    ch.le("max |F_128 - F_64| for s <= 6", doubling, 1e-10);
    Ok(ch.finish())
}

/// 4. −R(s, s) − R(−s, −s) = dF/ds.
fn resolvent_identity() -> Result<(bool, String)> {
    const N: usize = 96;
    let h = 1e-3;
    let mut jobs = Vec::new();
    for s in [2.0, 3.0, 4.0] {
        for g in [0.3, 0.7] {
            jobs.push((s, g));
        }
    }
    let errs: Vec<f64> = jobs
        .par_iter()
        .map(|&(s, g)| {
            let p = params(g, 0.0)?;
            let r = resolvent_boundary_trace(s, p, N)?;
            let fd = (fredholm_logdet(s + h, p, N)?.f - fredholm_logdet(s - h, p, N)?.f) / (2.0 * h);
            Ok((r - fd).abs())
        })
        .collect::<Result<_>>()?;
    let mut ch = Checks::new();
    ch.le("max |resolvent - central difference|", errs.iter().cloned().fold(0.0, f64::max), 1e-6);
    Ok(ch.finish())
}

/// 5. Large-gap law for γ = 0.5, ρ = 0.
fn large_gap() -> Result<(bool, String)> {
    let ss = [4.0, 6.0, 8.0, 10.0];
    let p = params(0.5, 0.0)?;
    let fs: Vec<f64> = ss.par_iter().map(|&s| Ok(logdet_converged(s, p, 1e-11)?.f)).collect::<Result<_>>()?;
    let mut errs = Vec::new();
    for (&s, &f) in ss.iter().zip(&fs) {
        errs.push((f - f_large_gap(s, 0.5, 0.0)?.total).abs());
    }
    let asy10 = f_large_gap(10.0, 0.5, 0.0)?;
    let no_const = (fs[3] - (asy10.total - asy10.constant)).abs();
    let logs: Vec<f64> = ss.iter().map(|s| s.ln()).collect();
    let loge: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let k = slope(&logs, &loge);
    let mut ch = Checks::new();
    ch.holds(format!("e(s = 4, 6, 8, 10) = {} strictly decreasing", fmt_list(&errs)), strictly_decreasing(&errs));
    ch.holds(format!("log-log slope {k:.3} in [-1.1, -0.35]"), (-1.1..=-0.35).contains(&k));
    let gain = no_const / errs[3];
    ch.holds(format!("constant improves s = 10 error by {gain:.1}x (>= 10x)"), gain >= 10.0);
    Ok(ch.finish())
}

/// 6. ½F′(10) against the large-s form of H, with and without cos 2ϑ.
fn h_asymptotics() -> Result<(bool, String)> {
    let (s, g, rho) = (10.0, 0.5, 0.0);
    let h_num = 0.5 * resolvent_boundary_trace(s, params(g, rho)?, 128)?;
    let full = h_large_s(s, g, rho)?;
    let smooth = h_large_s_smooth(s, g, rho)?;
    let rel = ((h_num - full) / h_num).abs();
    let rel_smooth = ((h_num - smooth) / h_num).abs();
    let mut ch = Checks::new();
    ch.le("relative error with cos term", rel, 2e-2);
    ch.holds(format!("without cos term {rel_smooth:.3e} > {rel:.3e}"), rel < rel_smooth);
    Ok(ch.finish())
}

fn trajectory(s0: f64) -> Result<Trajectory> {
    let (traj, report) = solve_trajectory(params(0.5, 0.0)?, SweepOptions { s0, ..SweepOptions::default() })?;
    if !report.converged {
        return Err(Error::NonConvergence { what: "solve_trajectory", detail: format!("last change {:e}", report.last_change) });
    }
    Ok(traj)
}

/// 7. Invariants and identities along the trajectory from s = 10 to 0.5,
/// and H against ½F′ on [2, 8].
fn trajectory_suite(traj: &Trajectory) -> Result<(bool, String)> {
    let rho = 0.0;
    let window = Trajectory {
        samples: traj.samples.iter().filter(|x| x.s >= 0.5 - 1e-12).cloned().collect(),
        direction: traj.direction,
        ic_source: traj.ic_source.clone(),
    };
    let ids = identity_report(&window, rho)?;
    let coupled = coupled_p0q0_residual(&window, rho)?;
    let mut ch = Checks::new();
    ch.le("max |sum p_k q_k|", window.max_constraint(), 1e-6);
    ch.le("max |Im H|", window.max_im_h(), 1e-6);
    ch.le("max dH/ds dual-form difference", ids.max_dh_forms_diff, 1e-9);
    ch.le("max relative zero-curvature residual", ids.max_zero_curvature, 1e-8);
    let c_max = coupled.iter().map(|r| r.third_order.max(r.second_order)).fold(0.0, f64::max);
    ch.le("max relative coupled p0/q0 residual", c_max, 1e-6);
    let ss: Vec<f64> = (2..=8).map(f64::from).collect();
    let p = params(0.5, rho)?;
    let rels: Vec<f64> = ss
        .par_iter()
        .map(|&s| {
            let half_fp = 0.5 * resolvent_boundary_trace(s, p, 128)?;
            let h = window.nearest(s).h.re;
            Ok(((h - half_fp) / half_fp).abs())
        })
        .collect::<Result<_>>()?;
    ch.le("max relative |H - F'/2| on s = 2..8", rels.iter().cloned().fold(0.0, f64::max), 2e-2);
    Ok(ch.finish())
}

/// 8. F(4) − F(0.5) = 2∫H, improving as the anchor s₀ grows.
fn integral_representation(traj10: &Trajectory) -> Result<(bool, String)> {
    let p = params(0.5, 0.0)?;
    let c10 = integral_representation_check_with(traj10, 0.5, 4.0, p)?;
    let c8 = integral_representation_check_with(&trajectory(8.0)?, 0.5, 4.0, p)?;
    let c12 = integral_representation_check_with(&trajectory(12.0)?, 0.5, 4.0, p)?;
    let mut ch = Checks::new();
    ch.le("relative discrepancy (s0 = 10)", c10.relative, 3e-2);
    ch.holds(
        format!("discrepancy s0 = 8: {:.4e} > s0 = 12: {:.4e}", c8.discrepancy, c12.discrepancy),
        c12.discrepancy < c8.discrepancy,
    );
    Ok(ch.finish())
}

/// 9. Moments and the CLT for the counting statistic at ρ = 0.
fn counting_statistics() -> Result<(bool, String)> {
    const N: usize = 100;
    let ss = [4.0, 6.0, 8.0, 10.0];
    let t_grid = linspace(-0.5, 0.5, 5);
    let rows: Vec<(f64, f64, f64, f64, f64)> = ss
        .par_iter()
        .map(|&s| {
            let disc = Discretisation::new(s, 0.0, N)?;
            let tr = moments_trace_with(&disc);
            let mg = moments_mgf_with(&disc)?;
            let st = counting_stats(s, 0.0);
            let clt = if s == 4.0 || s == 10.0 { clt_distance_with(&disc, s, 0.0, &t_grid)? } else { f64::NAN };
            let agree = (tr.mean - mg.mean).abs().max((tr.variance - mg.variance).abs());
            Ok((agree, (tr.mean - st.mu).abs(), tr.variance - st.sigma2, clt, s))
        })
        .collect::<Result<_>>()?;
    let mut ch = Checks::new();
    ch.le("max |trace - MGF| moments", rows.iter().map(|r| r.0).fold(0.0, f64::max), 1e-5);
    let vd = rows.last().map(|r| r.2).unwrap_or(f64::NAN);
    ch.holds(format!("Var N - sigma^2 at s = 10: {vd:.5} in 0.312200 +- 0.02"), (vd - 0.3122).abs() <= 0.02);
    let dev: Vec<f64> = rows.iter().map(|r| r.1).collect();
    ch.holds(format!("|E N - mu| on s = 4, 6, 8, 10: {} decreasing", fmt_list(&dev)), strictly_decreasing(&dev));
    let (c4, c10) = (rows[0].3, rows[rows.len() - 1].3);
    ch.holds(format!("CLT distance (|t| <= 1/2) s = 4: {c4:.4} > s = 10: {c10:.4} < 0.2"), c10 < c4 && c10 < 0.2);
    Ok(ch.finish())
}

/// 10. The γ = 1 constant is independent of ρ and the residual decays
/// like s^{−2/3}.
fn gamma_one_constant() -> Result<(bool, String)> {
    const N: usize = 140;
    let ss: Vec<f64> = (0..=8).map(|k| 6.0 + 0.5 * k as f64).collect();
    let mut fits = Vec::new();
    for rho in [0.0, 1.0] {
        let p = params(1.0, rho)?;
        let fs: Vec<f64> = ss.par_iter().map(|&s| Ok(fredholm_logdet(s, p, N)?.f)).collect::<Result<_>>()?;
        fits.push(fit_gamma1_constant(&ss, &fs, rho)?);
    }
    let diff = (fits[0].c - fits[1].c).abs();
    let bar = fits[0].err_bar.hypot(fits[1].err_bar);
    let w: Vec<f64> = fits.iter().map(|f| 1.0 / (f.err_bar * f.err_bar)).collect();
    let c_w = (fits[0].c * w[0] + fits[1].c * w[1]) / (w[0] + w[1]);
    let logs: Vec<f64> = ss.iter().map(|s| s.ln()).collect();
    let mut ch = Checks::new();
    ch.holds(
        format!(
            "C(rho = 0) = {:.6} +- {:.5}, C(rho = 1) = {:.6} +- {:.5}: |dC| = {diff:.5} <= {bar:.5}",
            fits[0].c, fits[0].err_bar, fits[1].c, fits[1].err_bar
        ),
        diff <= bar,
    );
    for (fit, rho) in fits.iter().zip([0.0, 1.0]) {
        let y: Vec<f64> = fit.residuals.iter().map(|r| (r - c_w).abs().ln()).collect();
        let k = slope(&logs, &y);
        ch.holds(format!("rho = {rho}: residual decay exponent {k:.3} in -2/3 +- 0.25"), (k + 2.0 / 3.0).abs() <= 0.25);
    }
    Ok(ch.finish())
}

/// 11. Jumps and origin expansion of the CHF parametrix.
fn chf_parametrix() -> Result<(bool, String)> {
    let mut ch = Checks::new();
    for beta in [0.05, 0.11, 0.3] {
        let r = chf_report(beta)?;
        let e = r.expansion.ok_or(Error::Degenerate { what: "chf_report", detail: "no expansion".into() })?;
        ch.le(&format!("beta = {beta}i: max ray residual"), r.max_ray_residual, 1e-9);
        ch.le(&format!("beta = {beta}i: Upsilon0 error"), e.upsilon0_error, 1e-12);
        ch.le(&format!("beta = {beta}i: Upsilon1(2,1) error"), e.upsilon1_21_error, 1e-10);
    }
    Ok(ch.finish())
}

/// Values ζ(2), …, ζ(16) for the small-z series of ln G(1 + z).
const ZETA: [f64; 15] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_2,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
];

/// ln G(1 + z) = (z/2) ln 2π − (z + (1 + γ_E)z²)/2 + Σ_{k≥3} (−1)^{k−1} ζ(k−1) z^k/k.
fn barnes_small_z(z: Complex64) -> Complex64 {
    let mut v = z / 2.0 * (2.0 * PI).ln() - (z + (1.0 + EULER_GAMMA) * z * z) / 2.0;
    let mut zk = z * z;
    for (i, zeta) in ZETA.iter().enumerate() {
        let k = i + 3;
        zk *= z;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        v += sign * zeta * zk / k as f64;
    }
    v
}

/// Kummer residual z y″ + (b − z) y′ − a y, derivatives by fourth-order
/// central differences, relative to the largest term.
fn kummer_residual(a: Complex64, b: Complex64, z: Complex64, y: impl Fn(Complex64) -> Result<Complex64>) -> Result<f64> {
    let h = 1e-3;
    let (f2m, f1m, f0, f1p, f2p) = (y(z - 2.0 * h)?, y(z - h)?, y(z)?, y(z + h)?, y(z + 2.0 * h)?);
    let d1 = (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
    let d2 = (-f2p + 16.0 * f1p - 30.0 * f0 + 16.0 * f1m - f2m) / (12.0 * h * h);
    let terms = [z * d2, (b - z) * d1, a * f0];
    let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
    Ok((terms[0] + terms[1] - terms[2]).norm() / scale)
}

/// 12. Barnes G, Γ reflection and Kummer's equation.
fn special_functions() -> Result<(bool, String)> {
    let c = Complex64::new;
    let mut ch = Checks::new();
    let mut rec: f64 = 0.0;
    for z in [c(1.5, 0.3), c(0.7, -0.2), c(2.2, 0.0), c(1.0, 0.8)] {
        // G(1 + z) = Γ(z) G(z)
        let lhs = barnes_ln_g(1.0 + z)?;
        let rhs = ln_gamma(z)? + barnes_ln_g(z)?;
        let d = lhs - rhs;
        let d = c(d.re, (d.im + PI).rem_euclid(2.0 * PI) - PI);
        rec = rec.max(d.norm());
    }
    ch.le("Barnes recurrence", rec, 1e-10);
    let mut small: f64 = 0.0;
    for z in [c(0.05, 0.0), c(0.0, 0.1), c(-0.1, 0.05), c(0.0, -0.11)] {
        small = small.max((barnes_ln_g(1.0 + z)? - barnes_small_z(z)).norm());
    }
    ch.le("Barnes small-z series", small, 1e-8);
    let mut refl: f64 = 0.0;
    for z in [c(0.3, 0.0), c(0.25, 0.7), c(-1.4, 0.2), c(0.5, -2.0)] {
        let lhs = gamma(z)? * gamma(1.0 - z)?;
        let rhs = PI / (PI * z).sin();
        refl = refl.max((lhs - rhs).norm() / rhs.norm());
    }
    ch.le("Gamma reflection (relative)", refl, 1e-12);
    let one = c(1.0, 0.0);
    let mut kum: f64 = 0.0;
    for (a, b, z) in [(c(0.3, 0.1), c(1.5, 0.0), c(2.0, 1.0)), (c(0.0, 0.11), one, c(-3.0, 0.5)), (c(1.0, -0.3), c(2.5, 0.2), c(0.4, -4.0))] {
        kum = kum.max(kummer_residual(a, b, z, |w| kummer_phi(a, b, w))?);
    }
    for (a, z) in [(c(0.0, 0.11), c(2.0, 1.0)), (c(1.0, -0.3), c(0.5, 3.0)), (c(1.0, 0.2), c(-2.0, -1.5))] {
        kum = kum.max(kummer_residual(a, one, z, |w| kummer_psi_b1(a, w))?);
    }
    ch.le("Kummer equation residual", kum, 1e-7);
    Ok(ch.finish())
}

/// Run criterion `id` (1..=12).
pub fn run_criterion(id: usize) -> CriterionOutcome {
    let start = Instant::now();
    let result = match id {
        1 => kernel_triple(),
        2 => pearcey_odes(),
        3 => determinant_sanity(),
        4 => resolvent_identity(),
        5 => large_gap(),
        6 => h_asymptotics(),
        7 => trajectory(10.0).and_then(|t| trajectory_suite(&t)),
        8 => trajectory(10.0).and_then(|t| integral_representation(&t)),
        9 => counting_statistics(),
        10 => gamma_one_constant(),
        11 => chf_parametrix(),
        12 => special_functions(),
        _ => Err(Error::Domain { function: "acceptance", detail: format!("no criterion {id}") }),
    };
    finish(id, start, result)
}

fn finish(id: usize, start: Instant, result: Result<(bool, String)>) -> CriterionOutcome {
    let seconds = start.elapsed().as_secs_f64();
    let budget_seconds = budget(id);
    let (mut passed, mut detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = budget_seconds {
        if seconds > b {
            passed = false;
            detail.push_str(&format!("; runtime {seconds:.1} s exceeds {b} s !"));
        }
    }
    CriterionOutcome { id, name: if (1..=CRITERIA).contains(&id) { criterion_name(id) } else { "unknown" }, passed, detail, seconds, budget_seconds }
}

/// Run every criterion in order. Criteria 7 and 8 share one trajectory.
pub fn run_all() -> Vec<CriterionOutcome> {
    let mut out = Vec::with_capacity(CRITERIA);
    for id in 1..=6 {
        out.push(run_criterion(id));
    }
    let start = Instant::now();
    let traj = trajectory(10.0);
    let shared = start.elapsed();
    let t7 = Instant::now();
    let r7 = traj.as_ref().map_err(Clone::clone).and_then(trajectory_suite);
    let mut o7 = finish(7, t7, r7);
    o7.seconds += shared.as_secs_f64();
    out.push(o7);
    let t8 = Instant::now();
    let r8 = traj.as_ref().map_err(Clone::clone).and_then(integral_representation);
    out.push(finish(8, t8, r8));
    for id in 9..=CRITERIA {
        out.push(run_criterion(id));
    }
    out
}
