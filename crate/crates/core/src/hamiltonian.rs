//! The eight-function Hamiltonian system for the deformed Pearcey
//! determinant: right-hand sides, the Hamiltonian, large-s boundary data,
//! trajectory integration and the differential identities satisfied along
//! solutions.
//!
//! # Unknowns
//!
//! p₀..p₃, q₀..q₃ are functions of s > 0 with
//!
//! ```text
//! p₀′ = −√2 p₃q₂                        q₀′ = √2 p₂q₁
//! p₁′ = −√2 p₀p₂ − s p₃ + (2/s)p₁p₂q₂    q₁′ = q₂ − (2/s)p₂q₁q₂
//! p₂′ = −√2 p₃q₀ − p₁ − (2/s)p₂²q₂      q₂′ = √2 p₀q₁ + q₃ + (2/s)p₂q₂²
//! p₃′ = −p₂ + (2/s)p₂p₃q₂               q₃′ = s q₁ + √2 q₀q₂ − (2/s)p₂q₂q₃
//! ```
//!
//! and H = √2p₀p₂q₁ + √2p₃q₀q₂ + p₁q₂ + p₂q₃ + s p₃q₁ + (p₁q₁ − p₂q₂ + p₃q₃)²/(2s).
//!
//! # Why a sweep instead of a plain backward integration
//!
//! The vector q = (q₁, q₂, q₃) obeys q′ = M(s)q and p = (p₁, p₂, p₃) obeys
//! p′ = −Mᵀp. For large s the three modes of q′ = Mq grow like
//! e^{(3/4)ωᵏs^{4/3}} (ω a cube root of unity). The physical q lies in the
//! span of the two modes that decay forward, and the physical p is
//! proportional to E₀ × q, where E₀ is the forward-dominant mode. Along
//! that solution Σpₖqₖ = 0 holds exactly.
//!
//! Integrating p backwards from large-s data excites a component that grows
//! like e^{(9/8)Δ(s^{4/3})}. Large-s data do not fix that component; the
//! small-s behaviour p₁, p₃ = O(s) does. A plain backward IVP therefore
//! overflows long before reaching s = 1. [`solve_trajectory`] instead
//! alternates a forward sweep for E₀ (started from E₀(a) = (1, 0, 0) at a
//! small a) with a backward sweep for (p₀, q₀, q) in which p = κ(s)·E₀ × q.
//! The amplitude κ is fitted to the large-s data, and M(s) is rebuilt from
//! the latest trajectory until the iteration converges.

use crate::asymptotics::{beta_of_gamma, theta3, vartheta};
use crate::error::{Error, Result};
use crate::fredholm::logdet_converged;
use crate::ode::{dopri5, AdaptiveOptions};
use crate::pearcey_fn::ModelParams;
use crate::specfun::ln_gamma;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};
use std::ops::{Add, Mul, Neg, Sub};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Hard limit on |Σ₁³pₖqₖ| during plain integration.
pub const CONSTRAINT_LIMIT: f64 = 1e-3;
/// Overflow guard for plain integration.
const OVERFLOW_GUARD: f64 = 1e150;

/// A point of the phase space together with its abscissa s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamState {
    /// p₀.
    pub p0: C,
    /// p₁.
    pub p1: C,
    /// p₂.
    pub p2: C,
    /// p₃.
    pub p3: C,
    /// q₀.
    pub q0: C,
    /// q₁.
    pub q1: C,
    /// q₂.
    pub q2: C,
    /// q₃.
    pub q3: C,
    /// Abscissa s > 0.
    pub s: f64,
}

impl HamState {
    /// Build from `[p₀, p₁, p₂, p₃, q₀, q₁, q₂, q₃]`.
    pub fn from_array(s: f64, y: [C; 8]) -> Self {
        Self { p0: y[0], p1: y[1], p2: y[2], p3: y[3], q0: y[4], q1: y[5], q2: y[6], q3: y[7], s }
    }

    /// `[p₀, p₁, p₂, p₃, q₀, q₁, q₂, q₃]`.
    pub fn to_array(&self) -> [C; 8] {
        [self.p0, self.p1, self.p2, self.p3, self.q0, self.q1, self.q2, self.q3]
    }

    /// Σ₁³ pₖqₖ.
    pub fn constraint(&self) -> C {
        self.p1 * self.q1 + self.p2 * self.q2 + self.p3 * self.q3
    }

    /// p₃q₁ + (p₀ + q₀ − ρ/√2)/√2, which vanishes along solutions.
    pub fn const2_residual(&self, rho: f64) -> C {
        self.p3 * self.q1 + (self.p0 + self.q0 - rho / SQRT_2) / SQRT_2
    }

    /// Shift p₀ and q₀ equally so that [`HamState::const2_residual`] vanishes.
    pub fn project_const2(&self, rho: f64) -> Self {
        let d = self.const2_residual(rho);
        let mut out = *self;
        out.p0 -= d * (SQRT_2 / 2.0);
        out.q0 -= d * (SQRT_2 / 2.0);
        out
    }

    fn check_s(&self, function: &'static str) -> Result<()> {
        if self.s == 0.0 {
            return Err(Error::Pole { function, at: "s = 0".into() });
        }
        if !(self.s > 0.0) {
            return Err(Error::Domain { function, detail: format!("s = {} must be positive", self.s) });
        }
        Ok(())
    }
}

/// Arithmetic needed to evaluate the right-hand sides on numbers and on
/// truncated Taylor series alike.
trait Field: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Mul<f64, Output = Self> {}
impl Field for C {}

fn rhs_generic<T: Field>(s: T, inv_s: T, y: &[T; 8]) -> [T; 8] {
    let [p0, p1, p2, p3, q0, q1, q2, q3] = *y;
    let two_over_s = inv_s * 2.0;
    [
        -(p3 * q2) * SQRT_2,
        -(p0 * p2) * SQRT_2 - s * p3 + two_over_s * p1 * p2 * q2,
        -(p3 * q0) * SQRT_2 - p1 - two_over_s * p2 * p2 * q2,
        -p2 + two_over_s * p2 * p3 * q2,
        p2 * q1 * SQRT_2,
        q2 - two_over_s * p2 * q1 * q2,
        p0 * q1 * SQRT_2 + q3 + two_over_s * p2 * q2 * q2,
        s * q1 + q0 * q2 * SQRT_2 - two_over_s * p2 * q2 * q3,
    ]
}

/// The eight right-hand sides at `state`, ordered as [`HamState::to_array`].
pub fn system_rhs(state: &HamState) -> Result<[C; 8]> {
    state.check_s("system_rhs")?;
    let s = C::new(state.s, 0.0);
    Ok(rhs_generic(s, C::new(1.0 / state.s, 0.0), &state.to_array()))
}

/// The Hamiltonian H at `state`.
pub fn hamiltonian_value(state: &HamState) -> Result<C> {
    state.check_s("hamiltonian_value")?;
    let HamState { p0, p1, p2, p3, q0, q1, q2, q3, s } = *state;
    let sq = p1 * q1 - p2 * q2 + p3 * q3;
    Ok(SQRT_2 * p0 * p2 * q1 + SQRT_2 * p3 * q0 * q2 + p1 * q2 + p2 * q3 + s * p3 * q1 + sq * sq / (2.0 * s))
}

/// Number of Taylor coefficients carried when composing derivatives.
const JET_LEN: usize = 5;

/// Truncated Taylor series in (s − s₀).
#[derive(Debug, Clone, Copy)]
struct Jet([C; JET_LEN]);

impl Jet {
    fn constant(c: C) -> Self {
        let mut v = [ZERO; JET_LEN];
        v[0] = c;
        Jet(v)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(o.0) {
            *a += b;
        }
        Jet(v)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|a| -a))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut v = [ZERO; JET_LEN];
        for i in 0..JET_LEN {
            for j in 0..JET_LEN - i {
                v[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(v)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet(self.0.map(|a| a * c))
    }
}

impl Field for Jet {}

/// Derivatives of order 0..=4 of every unknown along the flow through
/// `state`, obtained by composing the right-hand sides exactly (Taylor-mode
/// differentiation) rather than by differencing.
///
/// `result[k][i]` is the k-th derivative of unknown i.
pub fn flow_derivatives(state: &HamState) -> Result<[[C; 8]; JET_LEN]> {
    state.check_s("flow_derivatives")?;
    let s0 = state.s;
    let mut s_jet = Jet::constant(C::new(s0, 0.0));
    s_jet.0[1] = ONE;
    let mut inv = [ZERO; JET_LEN];
    for (k, c) in inv.iter_mut().enumerate() {
        *c = C::new((-1f64).powi(k as i32) / s0.powi(k as i32 + 1), 0.0);
    }
    let inv_jet = Jet(inv);
    let mut y: [Jet; 8] = state.to_array().map(Jet::constant);
    for k in 0..JET_LEN - 1 {
        let f = rhs_generic(s_jet, inv_jet, &y);
        for i in 0..8 {
            y[i].0[k + 1] = f[i].0[k] / (k as f64 + 1.0);
        }
    }
    let mut out = [[ZERO; 8]; JET_LEN];
    let mut fact = 1.0;
    for (k, row) in out.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        for i in 0..8 {
            row[i] = y[i].0[k] * fact;
        }
    }
    Ok(out)
}

/// The 3×3 matrix M(s) with q′ = Mq and p′ = −Mᵀp (valid on Σpₖqₖ = 0).
pub fn m_matrix(state: &HamState) -> [[C; 3]; 3] {
    let HamState { p0, p1, p2, p3, q0, q1, q2, q3, s } = *state;
    [
        [ZERO, ONE - 2.0 * p2 * q1 / s, ZERO],
        [SQRT_2 * p0 - 2.0 * p1 * q2 / s, ZERO, ONE - 2.0 * p3 * q2 / s],
        [C::new(s, 0.0), SQRT_2 * q0 - 2.0 * p2 * q3 / s, ZERO],
    ]
}

/// Values of p₀ and q₀ when β = 0: (√2/2)(±ρ³/54 + ρ/2).
pub fn beta_zero_p0_q0(rho: f64) -> (f64, f64) {
    let r3 = rho.powi(3) / 54.0;
    (SQRT_2 / 2.0 * (r3 + rho / 2.0), SQRT_2 / 2.0 * (-r3 + rho / 2.0))
}

/// Leading-order large-s behaviour of all eight unknowns.
///
/// With θ₃ = ¾s^{4/3} + (ρ/2)s^{2/3}, ϑ from [`vartheta`],
/// A = (2 sin(βπ)/3π)e^{θ₃/2 + 2βπi/3}|Γ(1−β)| and
/// B = 2i e^{−θ₃/2 − 2βπi/3}|Γ(1−β)|:
///
/// ```text
/// p₀ = (√6/2)βi·s^{2/3} + (√2/2)(ρ³/54 + ρ/2)
/// q₀ = −(√6/2)βi·s^{2/3} + (√2/2)(−ρ³/54 + ρ/2)
/// p₁ = −A s^{1/3}(cos(ϑ − π/3) + √3βi·cos(ϑ + π/3))    q₁ = B s^{−1/3} sin(ϑ − π/3)
/// p₂ = A cos ϑ                                         q₂ = −B sin ϑ
/// p₃ = −A s^{−1/3} cos(ϑ + π/3)                        q₃ = B s^{1/3}(sin(ϑ + π/3) − √3βi·sin(ϑ − π/3))
/// ```
pub fn asymptotic_state(s: f64, params: ModelParams) -> Result<HamState> {
    if !(s >= 4.0) {
        return Err(Error::Domain { function: "asymptotic_state", detail: format!("s = {s} < 4") });
    }
    let b = beta_of_gamma(params.gamma)?;
    let rho = params.rho;
    let bi = (b * Complex64::i()).re;
    let th3 = theta3(s, rho);
    let vt = vartheta(s, params.gamma, rho)?;
    let abs_g = ln_gamma(ONE - b)?.re.exp();
    let sin_bpi = (b * PI).sin();
    let a = 2.0 * sin_bpi / (3.0 * PI) * (0.5 * th3 + 2.0 / 3.0 * PI * Complex64::i() * b).exp() * abs_g;
    let bb = Complex64::new(0.0, 2.0) * (-0.5 * th3 - 2.0 / 3.0 * PI * Complex64::i() * b).exp() * abs_g;
    let (c0p, c0q) = beta_zero_p0_q0(rho);
    let r3 = 3f64.sqrt();
    let s13 = s.cbrt();
    let third = PI / 3.0;
    Ok(HamState {
        p0: C::new(6f64.sqrt() / 2.0 * bi * s.powf(2.0 / 3.0) + c0p, 0.0),
        q0: C::new(-(6f64.sqrt()) / 2.0 * bi * s.powf(2.0 / 3.0) + c0q, 0.0),
        p1: -a * s13 * ((vt - third).cos() + r3 * bi * (vt + third).cos()),
        p2: a * vt.cos(),
        p3: -a / s13 * (vt + third).cos(),
        q1: bb / s13 * (vt - third).sin(),
        q2: -bb * vt.sin(),
        q3: bb * s13 * ((vt + third).sin() - r3 * bi * (vt - third).sin()),
        s,
    })
}

/// Integration direction of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Increasing s.
    Forward,
    /// Decreasing s.
    Backward,
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    /// Abscissa.
    pub s: f64,
    /// State.
    pub state: HamState,
    /// Hamiltonian.
    pub h: C,
}

/// A sampled solution of the system, ordered by increasing s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Samples with strictly increasing s.
    pub samples: Vec<Sample>,
    /// Direction of integration.
    pub direction: Direction,
    /// Description of the initial/boundary data.
    pub ic_source: String,
}

impl Trajectory {
    fn from_states(mut states: Vec<HamState>, direction: Direction, ic_source: String) -> Result<Self> {
        states.sort_by(|a, b| a.s.total_cmp(&b.s));
        let samples = states
            .into_iter()
            .map(|st| Ok(Sample { s: st.s, state: st, h: hamiltonian_value(&st)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { samples, direction, ic_source })
    }

    /// Index of the sample whose abscissa equals `s` to 1e-9.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        let i = self.samples.partition_point(|x| x.s < s - 1e-9);
        (i < self.samples.len() && (self.samples[i].s - s).abs() <= 1e-9).then_some(i)
    }

    /// Sample nearest to `s`.
    pub fn nearest(&self, s: f64) -> &Sample {
        let i = self.samples.partition_point(|x| x.s < s).min(self.samples.len() - 1);
        if i > 0 && (self.samples[i - 1].s - s).abs() < (self.samples[i].s - s).abs() {
            &self.samples[i - 1]
        } else {
            &self.samples[i]
        }
    }

    /// Largest |Im H| along the trajectory.
    pub fn max_im_h(&self) -> f64 {
        self.samples.iter().map(|x| x.h.im.abs()).fold(0.0, f64::max)
    }

    /// Largest |Σ₁³pₖqₖ| along the trajectory.
    pub fn max_constraint(&self) -> f64 {
        self.samples.iter().map(|x| x.state.constraint().norm()).fold(0.0, f64::max)
    }

    /// ∫ Re H ds over [lo, hi] by composite Simpson on the samples, which
    /// must be uniformly spaced there with lo and hi among them.
    pub fn integrate_h(&self, lo: f64, hi: f64) -> Result<f64> {
        let (i0, i1) = match (self.index_of(lo), self.index_of(hi)) {
            (Some(a), Some(b)) if b > a => (a, b),
            _ => {
                return Err(Error::Domain {
                    function: "integrate_h",
                    detail: format!("[{lo}, {hi}] endpoints are not trajectory samples"),
                })
            }
        };
        let ys: Vec<f64> = self.samples[i0..=i1].iter().map(|x| x.h.re).collect();
        let h = (hi - lo) / (i1 - i0) as f64;
        Ok(simpson(&ys, h))
    }

    /// Column names of [`Trajectory::csv_rows`].
    pub fn csv_columns() -> Vec<String> {
        let mut cols = vec!["s".to_string()];
        for name in ["p0", "p1", "p2", "p3", "q0", "q1", "q2", "q3"] {
            cols.push(format!("re_{name}"));
            cols.push(format!("im_{name}"));
        }
        cols.extend(["re_H", "im_H", "constraint_abs", "const2_abs", "dh_forms_abs"].map(String::from));
        cols
    }

    /// One numeric row per sample (see [`Trajectory::csv_columns`]).
    pub fn csv_rows(&self, rho: f64) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|x| {
                let mut row = vec![x.s];
                for v in x.state.to_array() {
                    row.push(v.re);
                    row.push(v.im);
                }
                row.push(x.h.re);
                row.push(x.h.im);
                row.push(x.state.constraint().norm());
                row.push(x.state.const2_residual(rho).norm());
                let dh = dh_ds_forms(&x.state, rho).map(|(a, b)| (a - b).norm()).unwrap_or(f64::NAN);
                row.push(dh);
                row
            })
            .collect()
    }
}

/// Composite Simpson rule on uniformly spaced samples; an odd number of
/// intervals is finished with the 3/8 rule.
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    match n {
        0 => 0.0,
        1 => 0.5 * h * (y[0] + y[1]),
        _ => {
            let (m, tail) = if n % 2 == 0 { (n, 0.0) } else { (n - 3, 3.0 * h / 8.0 * (y[n - 3] + 3.0 * y[n - 2] + 3.0 * y[n - 1] + y[n])) };
            let mut acc = y[0] + y[m];
            for (i, v) in y.iter().enumerate().take(m).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            h / 3.0 * acc + tail
        }
    }
}

/// Plain adaptive integration of the system from `init` (at `init.s`) to
/// `s_to`, recording at least 200 equally spaced samples.
///
/// Errors with [`Error::ConstraintBlowup`] once |Σ₁³pₖqₖ| exceeds 1e-3
/// and with [`Error::NotFinite`] when a component passes 1e150. Long
/// backward runs from large-s data hit these limits; use
/// [`solve_trajectory`] for those.
pub fn integrate(init: &HamState, s_to: f64, tol: f64) -> Result<Trajectory> {
    init.check_s("integrate")?;
    if !(s_to > 0.0) {
        return Err(Error::Domain { function: "integrate", detail: format!("s_to = {s_to} must be positive") });
    }
    let opts = AdaptiveOptions { rtol: tol, ..AdaptiveOptions::default() };
    let mut f = |s: f64, y: &[C]| -> Result<Vec<C>> {
        let st = HamState::from_array(s, y.try_into().expect("state has eight components"));
        Ok(system_rhs(&st)?.to_vec())
    };
    let guard = |s: f64, y: &[C]| -> Result<()> {
        if y.iter().any(|v| !(v.norm() < OVERFLOW_GUARD)) {
            return Err(Error::NotFinite { what: "integrate" });
        }
        let st = HamState::from_array(s, y.try_into().expect("state has eight components"));
        let c = st.constraint().norm();
        if c > CONSTRAINT_LIMIT {
            return Err(Error::ConstraintBlowup { s, value: c });
        }
        Ok(())
    };
    let n = 200;
    let mut states = vec![*init];
    let mut y = init.to_array().to_vec();
    let s_from = init.s;
    for k in 1..=n {
        let a = s_from + (s_to - s_from) * (k - 1) as f64 / n as f64;
        let b = s_from + (s_to - s_from) * k as f64 / n as f64;
        y = dopri5(&mut f, a, &y, b, opts, guard)?;
        states.push(HamState::from_array(b, y.clone().try_into().expect("state has eight components")));
    }
    let direction = if s_to < s_from { Direction::Backward } else { Direction::Forward };
    Trajectory::from_states(states, direction, format!("initial value at s = {s_from}"))
}

/// Controls for [`solve_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Large-s end where the asymptotic data are imposed.
    pub s0: f64,
    /// Small-s end where E₀(a) = (1, 0, 0).
    pub a: f64,
    /// Target grid spacing.
    pub h: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Convergence threshold on max |ΔH| between iterations.
    pub tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { s0: 10.0, a: 0.3, h: 0.005, max_iter: 40, tol: 1e-11 }
    }
}

/// Diagnostics of [`solve_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepReport {
    /// Iterations performed.
    pub iterations: usize,
    /// max |ΔH| in the last iteration.
    pub last_change: f64,
    /// Whether `last_change < tol`.
    pub converged: bool,
    /// Fitted amplitude κ(s₀), with p(s₀) = κ(s₀)·Ê₀(s₀) × q(s₀).
    pub amplitude: (f64, f64),
    /// Relative misfit between fitted p(s₀) and the asymptotic p(s₀).
    pub p_fit_misfit: f64,
}

/// Value of uniformly sampled data at the midpoint between nodes i and
/// i + 1 by six-point Lagrange interpolation (window clamped at the ends).
fn interp_mid<const K: usize>(vals: &[[C; K]], i: usize) -> [C; K] {
    let n = vals.len();
    let width = 6.min(n);
    let start = (i as isize - 2).clamp(0, (n - width) as isize) as usize;
    let x = i as f64 + 0.5;
    let mut out = [ZERO; K];
    for j in start..start + width {
        let mut w = 1.0;
        for m in start..start + width {
            if m != j {
                w *= (x - m as f64) / (j as f64 - m as f64);
            }
        }
        for k in 0..K {
            out[k] += vals[j][k] * w;
        }
    }
    out
}

fn cross(a: &[C; 3], b: &[C; 3]) -> [C; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn vdot(a: &[C; 3], b: &[C; 3]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn matvec(m: &[[C; 3]; 3], v: &[C; 3]) -> [C; 3] {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// State at s from (p₀, q₀, q) with p = κ·Ê × q.
fn slaved_state(s: f64, z: &[C; 5], e: &[C; 3], kappa: C) -> HamState {
    let q = [z[2], z[3], z[4]];
    let p = cross(e, &q).map(|v| v * kappa);
    HamState { p0: z[0], p1: p[0], p2: p[1], p3: p[2], q0: z[1], q1: q[0], q2: q[1], q3: q[2], s }
}

/// Right-hand side of the backward sweep unknowns (p₀, q₀, q₁, q₂, q₃).
fn backward_rhs(st: &HamState) -> [C; 5] {
    let m = m_matrix(st);
    let dq = matvec(&m, &[st.q1, st.q2, st.q3]);
    [-SQRT_2 * st.p3 * st.q2, SQRT_2 * st.p2 * st.q1, dq[0], dq[1], dq[2]]
}

/// Right-hand side of the normalised forward mode: Ê′ = MÊ − Re⟨Ê, MÊ⟩Ê,
/// L′ = Re⟨Ê, MÊ⟩ (stored in slot 3).
fn forward_rhs(m: &[[C; 3]; 3], z: &[C; 4]) -> [C; 4] {
    let e = [z[0], z[1], z[2]];
    let me = matvec(m, &e);
    let r = vdot(&e, &me).re / vdot(&e, &e).re;
    [me[0] - e[0] * r, me[1] - e[1] * r, me[2] - e[2] * r, C::new(r, 0.0)]
}

fn add_scaled<const K: usize>(a: &[C; K], h: f64, b: &[C; K]) -> [C; K] {
    let mut out = *a;
    for k in 0..K {
        out[k] += b[k] * h;
    }
    out
}

fn rk4_combine<const K: usize>(y: &[C; K], h: f64, k: [[C; K]; 4]) -> [C; K] {
    let mut out = *y;
    for i in 0..K {
        out[i] += (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]) * (h / 6.0);
    }
    out
}

/// Solve the system on [a, s₀] with the large-s data of
/// [`asymptotic_state`] and the small-s condition that p is slaved to the
/// forward-dominant mode started at E₀(a) = (1, 0, 0).
///
/// Returns the trajectory on a uniform grid of spacing ≈ `opts.h`. Along it
/// Σ₁³pₖqₖ = 0 to rounding, and p₀, q₀ are projected after every step onto
/// the first integral p₃q₁ = −(p₀ + q₀ − ρ/√2)/√2.
pub fn solve_trajectory(params: ModelParams, opts: SweepOptions) -> Result<(Trajectory, SweepReport)> {
    if !(opts.a > 0.0 && opts.s0 > opts.a && opts.h > 0.0) {
        return Err(Error::Domain { function: "solve_trajectory", detail: format!("{opts:?}") });
    }
    let rho = params.rho;
    let n = ((opts.s0 - opts.a) / opts.h).round().max(8.0) as usize;
    let h = (opts.s0 - opts.a) / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| opts.a + h * i as f64).collect();
    let s0 = grid[n];
    let asy = asymptotic_state(s0, params)?;
    let q_asy = [asy.q1, asy.q2, asy.q3];
    let p_asy = [asy.p1, asy.p2, asy.p3];

    let (c0p, c0q) = beta_zero_p0_q0(rho);
    let mut states: Vec<[C; 8]> = grid
        .iter()
        .map(|_| [C::new(c0p, 0.0), ZERO, ZERO, ZERO, C::new(c0q, 0.0), ZERO, ZERO, ZERO])
        .collect();
    let mut h_prev: Option<Vec<C>> = None;
    let mut report =
        SweepReport { iterations: 0, last_change: f64::INFINITY, converged: false, amplitude: (0.0, 0.0), p_fit_misfit: 0.0 };

    for iter in 0..opts.max_iter {
        // Forward sweep for the dominant mode.
        let m_at = |i: usize| m_matrix(&HamState::from_array(grid[i], states[i]));
        let m_mid = |i: usize| m_matrix(&HamState::from_array(grid[i] + h / 2.0, interp_mid(&states, i)));
        let mut e_vals: Vec<[C; 3]> = Vec::with_capacity(n + 1);
        let mut l_vals: Vec<f64> = Vec::with_capacity(n + 1);
        let mut z = [ONE, ZERO, ZERO, ZERO];
        e_vals.push([ONE, ZERO, ZERO]);
        l_vals.push(0.0);
        for i in 0..n {
            let (m0, mm, m1) = (m_at(i), m_mid(i), m_at(i + 1));
            let k1 = forward_rhs(&m0, &z);
            let k2 = forward_rhs(&mm, &add_scaled(&z, h / 2.0, &k1));
            let k3 = forward_rhs(&mm, &add_scaled(&z, h / 2.0, &k2));
            let k4 = forward_rhs(&m1, &add_scaled(&z, h, &k3));
            z = rk4_combine(&z, h, [k1, k2, k3, k4]);
            let e = [z[0], z[1], z[2]];
            let nrm = vdot(&e, &e).re.sqrt();
            if !(nrm.is_finite() && nrm > 0.0) {
                return Err(Error::NotFinite { what: "solve_trajectory forward sweep" });
            }
            z = [e[0] / nrm, e[1] / nrm, e[2] / nrm, C::new(z[3].re + nrm.ln(), 0.0)];
            e_vals.push([z[0], z[1], z[2]]);
            l_vals.push(z[3].re);
        }

        // Fit the amplitude of p at s₀.
        let e_end = e_vals[n];
        let d = cross(&e_end, &q_asy);
        let dd = vdot(&d, &d).re;
        let amp = if dd > 0.0 { vdot(&d, &p_asy) / dd } else { ZERO };
        let p_fit = d.map(|v| v * amp);
        let p_norm = vdot(&p_asy, &p_asy).re.sqrt();
        let misfit = if p_norm > 0.0 {
            let diff = [0, 1, 2].map(|k| p_fit[k] - p_asy[k]);
            vdot(&diff, &diff).re.sqrt() / p_norm
        } else {
            0.0
        };
        let l_end = l_vals[n];
        let kappa_node: Vec<C> = l_vals.iter().map(|l| amp * (l - l_end).exp()).collect();
        let lv: Vec<[C; 1]> = l_vals.iter().map(|l| [C::new(*l, 0.0)]).collect();
        let kappa_mid = |i: usize| amp * (interp_mid(&lv, i)[0].re - l_end).exp();

        // Backward sweep for (p₀, q₀, q).
        let start = slaved_state(s0, &[asy.p0, asy.q0, asy.q1, asy.q2, asy.q3], &e_end, kappa_node[n]).project_const2(rho);
        let mut zb = [start.p0, start.q0, start.q1, start.q2, start.q3];
        let mut new_states = vec![[ZERO; 8]; n + 1];
        new_states[n] = start.to_array();
        for i in (1..=n).rev() {
            let f = |s: f64, z: &[C; 5], e: &[C; 3], kap: C| backward_rhs(&slaved_state(s, z, e, kap));
            let e_mid = interp_mid(&e_vals, i - 1);
            let k_mid = kappa_mid(i - 1);
            let s_mid = grid[i - 1] + h / 2.0;
            let k1 = f(grid[i], &zb, &e_vals[i], kappa_node[i]);
            let k2 = f(s_mid, &add_scaled(&zb, -h / 2.0, &k1), &e_mid, k_mid);
            let k3 = f(s_mid, &add_scaled(&zb, -h / 2.0, &k2), &e_mid, k_mid);
            let k4 = f(grid[i - 1], &add_scaled(&zb, -h, &k3), &e_vals[i - 1], kappa_node[i - 1]);
            zb = rk4_combine(&zb, -h, [k1, k2, k3, k4]);
            let st = slaved_state(grid[i - 1], &zb, &e_vals[i - 1], kappa_node[i - 1]).project_const2(rho);
            zb = [st.p0, st.q0, st.q1, st.q2, st.q3];
            if st.to_array().iter().any(|v| !(v.norm() < OVERFLOW_GUARD)) {
                return Err(Error::NotFinite { what: "solve_trajectory backward sweep" });
            }
            new_states[i - 1] = st.to_array();
        }

        let h_new: Vec<C> = new_states
            .iter()
            .zip(&grid)
            .map(|(y, &s)| hamiltonian_value(&HamState::from_array(s, *y)))
            .collect::<Result<_>>()?;
        let change = match &h_prev {
            Some(prev) => prev.iter().zip(&h_new).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max),
            None => f64::INFINITY,
        };
        states = new_states;
        h_prev = Some(h_new);
        report = SweepReport {
            iterations: iter + 1,
            last_change: change,
            converged: change < opts.tol,
            amplitude: (amp.re, amp.im),
            p_fit_misfit: misfit,
        };
        if report.converged {
            break;
        }
    }
    let hs: Vec<HamState> = states.iter().zip(&grid).map(|(y, &s)| HamState::from_array(s, *y)).collect();
    let traj = Trajectory::from_states(
        hs,
        Direction::Backward,
        format!("asymptotic data at s0 = {s0}; dominant mode E0({}) = (1,0,0)", opts.a),
    )?;
    Ok((traj, report))
}

/// The two expressions for dH/ds: `p₃q₁ − 2p₂²q₂²/s²` and
/// `−(p₀+q₀−ρ/√2)/√2 − (p₀′q₀′)²/(s²(p₀+q₀−ρ/√2)²)`.
pub fn dh_ds_forms(state: &HamState, rho: f64) -> Result<(C, C)> {
    state.check_s("dh_ds_forms")?;
    let HamState { p0, p2, p3, q0, q1, q2, s, .. } = *state;
    let form1 = p3 * q1 - 2.0 * p2 * p2 * q2 * q2 / (s * s);
    let den = p0 + q0 - rho / SQRT_2;
    if den.norm() < 1e-300 {
        return Err(Error::Degenerate { what: "dh_ds_forms", detail: "p0 + q0 - rho/sqrt2 = 0".into() });
    }
    let dp0 = -SQRT_2 * p3 * q2;
    let dq0 = SQRT_2 * p2 * q1;
    let form2 = -den / SQRT_2 - (dp0 * dq0) * (dp0 * dq0) / (s * s * den * den);
    Ok((form1, form2))
}

/// Residuals of the differential identities at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityRow {
    /// Abscissa.
    pub s: f64,
    /// dH/ds, first expression.
    pub dh_form1: f64,
    /// |first − second expression for dH/ds|.
    pub dh_forms_diff: f64,
    /// |first expression − dH/ds from the composed flow|.
    pub dh_flow_diff: f64,
    /// Residual of Σ₀³pₖqₖ′ − H = H + ¼(2p₀q₀ + p₂q₂ + 2p₃q₃ − 3sH)′.
    pub action: f64,
    /// |p₃q₁ + (p₀ + q₀ − ρ/√2)/√2|.
    pub const2: f64,
    /// |p₂q₂ − p₀′q₀′/(√2(p₀ + q₀ − ρ/√2))|.
    pub pq2: f64,
    /// |Σ₁³pₖqₖ|.
    pub constraint: f64,
    /// ‖A₁′ + [A₁, M]‖ / max(‖A₁′‖, ‖[A₁, M]‖, 1e-300) with A₁ = q pᵀ.
    pub zero_curvature: f64,
}

/// Maxima of an identity table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    /// Per-sample residuals.
    pub rows: Vec<IdentityRow>,
    /// Largest |form1 − form2|.
    pub max_dh_forms_diff: f64,
    /// Largest action-identity residual.
    pub max_action: f64,
    /// Largest first-integral residual.
    pub max_const2: f64,
    /// Largest p₂q₂ identity residual.
    pub max_pq2: f64,
    /// Largest |Σpₖqₖ|.
    pub max_constraint: f64,
    /// Largest relative zero-curvature residual.
    pub max_zero_curvature: f64,
}

fn frob(m: &[[C; 3]; 3]) -> f64 {
    m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Evaluate every identity at one state.
pub fn identity_row(state: &HamState, rho: f64) -> Result<IdentityRow> {
    let d = flow_derivatives(state)?;
    let y = state.to_array();
    let dy = d[1];
    let s = state.s;
    let h = hamiltonian_value(state)?;
    let (f1, f2) = dh_ds_forms(state, rho)?;
    // dH/ds along the flow: ∂H/∂s + Σ(∂H/∂pₖ pₖ′ + ∂H/∂qₖ qₖ′) = ∂H/∂s on solutions.
    let sq = state.p1 * state.q1 - state.p2 * state.q2 + state.p3 * state.q3;
    let dsq = dy[1] * y[5] + y[1] * dy[5] - dy[2] * y[6] - y[2] * dy[6] + dy[3] * y[7] + y[3] * dy[7];
    let dh_flow = SQRT_2 * (dy[0] * y[2] * y[5] + y[0] * dy[2] * y[5] + y[0] * y[2] * dy[5])
        + SQRT_2 * (dy[3] * y[4] * y[6] + y[3] * dy[4] * y[6] + y[3] * y[4] * dy[6])
        + dy[1] * y[6]
        + y[1] * dy[6]
        + dy[2] * y[7]
        + y[2] * dy[7]
        + y[3] * y[5]
        + s * (dy[3] * y[5] + y[3] * dy[5])
        + sq * dsq / s
        - sq * sq / (2.0 * s * s);
    // Action identity.
    let lhs: C = (0..4).map(|k| y[k] * dy[k + 4]).sum::<C>() - h;
    let d_bracket = 2.0 * (dy[0] * y[4] + y[0] * dy[4]) + (dy[2] * y[6] + y[2] * dy[6]) + 2.0 * (dy[3] * y[7] + y[3] * dy[7])
        - 3.0 * h
        - 3.0 * s * f1;
    let rhs = h + 0.25 * d_bracket;
    // p₂q₂ identity.
    let den = state.p0 + state.q0 - rho / SQRT_2;
    let pq2 = (state.p2 * state.q2 - dy[0] * dy[4] / (SQRT_2 * den)).norm();
    // Zero curvature: A₁ = q pᵀ, A₁′ = q′pᵀ + q p′ᵀ.
    let q = [y[5], y[6], y[7]];
    let p = [y[1], y[2], y[3]];
    let dq = [dy[5], dy[6], dy[7]];
    let dp = [dy[1], dy[2], dy[3]];
    let m = m_matrix(state);
    let mut a1 = [[ZERO; 3]; 3];
    let mut da1 = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a1[i][j] = q[i] * p[j];
            da1[i][j] = dq[i] * p[j] + q[i] * dp[j];
        }
    }
    let mut comm = [[ZERO; 3]; 3];
    let mut resid = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut c = ZERO;
            for k in 0..3 {
                c += a1[i][k] * m[k][j] - m[i][k] * a1[k][j];
            }
            comm[i][j] = c;
            resid[i][j] = da1[i][j] + c;
        }
    }
    let scale = frob(&da1).max(frob(&comm)).max(1e-300);
    let zc = if frob(&da1) == 0.0 && frob(&comm) == 0.0 { 0.0 } else { frob(&resid) / scale };
    Ok(IdentityRow {
        s,
        dh_form1: f1.re,
        dh_forms_diff: (f1 - f2).norm(),
        dh_flow_diff: (f1 - dh_flow).norm(),
        action: (lhs - rhs).norm(),
        const2: state.const2_residual(rho).norm(),
        pq2,
        constraint: state.constraint().norm(),
        zero_curvature: zc,
    })
}

/// Evaluate every identity at every sample of `traj`.
pub fn identity_report(traj: &Trajectory, rho: f64) -> Result<IdentityReport> {
    let rows = traj.samples.iter().map(|x| identity_row(&x.state, rho)).collect::<Result<Vec<_>>>()?;
    let max = |f: fn(&IdentityRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(IdentityReport {
        max_dh_forms_diff: max(|r| r.dh_forms_diff),
        max_action: max(|r| r.action),
        max_const2: max(|r| r.const2),
        max_pq2: max(|r| r.pq2),
        max_constraint: max(|r| r.constraint),
        max_zero_curvature: max(|r| r.zero_curvature),
        rows,
    })
}

/// Residuals of the coupled third-order equation for p₀ and the
/// second-order equation for q₀ at one sample (relative to the size of the
/// largest term).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoupledRow {
    /// Abscissa.
    pub s: f64,
    /// Relative residual of the p₀‴ equation.
    pub third_order: f64,
    /// Relative residual of the q₀″ equation.
    pub second_order: f64,
}

/// Evaluate the coupled p₀/q₀ equations at one state, with all derivatives
/// composed exactly from the right-hand sides.
pub fn coupled_p0q0_row(state: &HamState, rho: f64) -> Result<CoupledRow> {
    let d = flow_derivatives(state)?;
    let s = state.s;
    let (p0, q0) = (d[0][0], d[0][4]);
    let (p1d, p2d, p3d) = (d[1][0], d[2][0], d[3][0]);
    let (q1d, q2d) = (d[1][4], d[2][4]);
    let w = p0 + q0 - rho / SQRT_2;
    if w.norm() < 1e-8 {
        return Err(Error::Degenerate { what: "coupled_p0q0_residual", detail: format!("|p0 + q0 - rho/sqrt2| < 1e-8 at s = {s}") });
    }
    let r22 = 2.0 * SQRT_2;
    let t_a = rho * p1d;
    let t_b = -r22 * q1d * p1d * p1d / (s * s * w);
    let factor = ONE + r22 / s * p1d;
    let inner_terms = [s * w, 2.0 * q1d * p2d / w, q2d * p1d / w, -p1d * q1d * (2.0 * q1d + p1d) / (w * w)];
    let inner: C = inner_terms.iter().sum();
    let rhs3 = t_a + t_b + factor * inner;
    // Relative to the largest individual term: near zeros of w the 1/w and
    // 1/w² pieces are large and cancel, which sets the rounding level.
    let scale3 = inner_terms
        .iter()
        .map(|t| (factor * t).norm())
        .fold(p3d.norm().max(t_a.norm()).max(t_b.norm()), f64::max)
        .max(1e-300);
    let third = if p3d == rhs3 { 0.0 } else { (p3d - rhs3).norm() / scale3 };

    let u1 = -p2d;
    let u2 = p1d * q1d / w * (3.0 + r22 / s * (p1d - q1d));
    let u3 = SQRT_2 * (p0 + q0) * w;
    let rhs2 = u1 + u2 + u3;
    let scale2 = q2d.norm().max(u1.norm()).max(u2.norm()).max(u3.norm()).max(1e-300);
    let second = if q2d == rhs2 { 0.0 } else { (q2d - rhs2).norm() / scale2 };
    Ok(CoupledRow { s, third_order: third, second_order: second })
}

/// Coupled-equation residuals at every sample of `traj`.
pub fn coupled_p0q0_residual(traj: &Trajectory, rho: f64) -> Result<Vec<CoupledRow>> {
    traj.samples.iter().map(|x| coupled_p0q0_row(&x.state, rho)).collect()
}

/// Outcome of comparing F(s_hi) − F(s_lo) with 2∫H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralCheck {
    /// F(s_hi) − F(s_lo) from Fredholm determinants.
    pub fredholm_diff: f64,
    /// 2∫_{s_lo}^{s_hi} H ds from the trajectory.
    pub hamiltonian_integral: f64,
    /// Absolute discrepancy.
    pub discrepancy: f64,
    /// Discrepancy relative to |F(s_hi) − F(s_lo)| (0 when both vanish).
    pub relative: f64,
}

/// Compare [F(s_hi) − F(s_lo)] with 2∫H on a trajectory solved with `opts`.
pub fn integral_representation_check(s_lo: f64, s_hi: f64, params: ModelParams, opts: SweepOptions) -> Result<IntegralCheck> {
    if !(0.5 <= s_lo && s_lo < s_hi && s_hi <= 10.0) {
        return Err(Error::Domain { function: "integral_representation_check", detail: format!("[{s_lo}, {s_hi}]") });
    }
    let (traj, _) = solve_trajectory(params, opts)?;
    integral_representation_check_with(&traj, s_lo, s_hi, params)
}

/// [`integral_representation_check`] on an existing trajectory.
pub fn integral_representation_check_with(traj: &Trajectory, s_lo: f64, s_hi: f64, params: ModelParams) -> Result<IntegralCheck> {
    let f_hi = logdet_converged(s_hi, params, 1e-10)?.f;
    let f_lo = logdet_converged(s_lo, params, 1e-10)?.f;
    let fd = f_hi - f_lo;
    let hi = 2.0 * traj.integrate_h(s_lo, s_hi)?;
    let disc = (fd - hi).abs();
    let relative = if fd == 0.0 { if disc == 0.0 { 0.0 } else { f64::INFINITY } } else { disc / fd.abs() };
    Ok(IntegralCheck { fredholm_diff: fd, hamiltonian_integral: hi, discrepancy: disc, relative })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn admissible_state() -> HamState {
        let mut st = HamState {
            p0: c(0.3, -0.1),
            p1: c(0.7, 0.2),
            p2: c(-0.4, 0.5),
            p3: c(0.9, -0.3),
            q0: c(-0.2, 0.4),
            q1: c(0.1, 0.6),
            q2: c(0.8, -0.7),
            q3: ZERO,
            s: 1.7,
        };
        st.q3 = -(st.p1 * st.q1 + st.p2 * st.q2) / st.p3;
        st
    }

    #[test]
    fn beta_zero_state_is_stationary() {
        let (p0, q0) = beta_zero_p0_q0(0.7);
        let st = HamState::from_array(3.0, [c(p0, 0.0), ZERO, ZERO, ZERO, c(q0, 0.0), ZERO, ZERO, ZERO]);
        assert!(system_rhs(&st).unwrap().iter().all(|v| v.norm() == 0.0));
        assert_eq!(hamiltonian_value(&st).unwrap(), ZERO);
    }

    #[test]
    fn pole_at_zero() {
        let st = HamState::from_array(0.0, [ONE; 8]);
        assert!(matches!(system_rhs(&st), Err(Error::Pole { .. })));
    }

    #[test]
    fn rhs_is_hamiltonian_on_constraint() {
        let st = admissible_state();
        let f = system_rhs(&st).unwrap();
        let y = st.to_array();
        let eps = 1e-6;
        for i in 0..8 {
            let mut yp = y;
            let mut ym = y;
            yp[i] += eps;
            ym[i] -= eps;
            let dh = (hamiltonian_value(&HamState::from_array(st.s, yp)).unwrap()
                - hamiltonian_value(&HamState::from_array(st.s, ym)).unwrap())
                / (2.0 * eps);
            // q' = ∂H/∂p, p' = −∂H/∂q
            let expected = if i < 4 { f[i + 4] } else { -f[i - 4] };
            assert!((dh - expected).norm() < 1e-7, "component {i}: {dh} vs {expected}");
        }
    }

    #[test]
    fn constraint_is_conserved_by_rhs() {
        let st = admissible_state();
        let f = system_rhs(&st).unwrap();
        let y = st.to_array();
        let d: C = (1..4).map(|k| f[k] * y[k + 4] + y[k] * f[k + 4]).sum();
        assert!(d.norm() < 1e-10);
    }

    #[test]
    fn flow_derivatives_match_rhs_and_differences() {
        let st = admissible_state();
        let d = flow_derivatives(&st).unwrap();
        let f = system_rhs(&st).unwrap();
        for i in 0..8 {
            assert!((d[1][i] - f[i]).norm() < 1e-14);
        }
        // Second derivative against a difference of the rhs along the flow.
        let eps = 1e-5;
        let y = st.to_array();
        let shift = |t: f64| {
            let mut z = y;
            for i in 0..8 {
                z[i] += f[i] * t;
            }
            system_rhs(&HamState::from_array(st.s + t, z)).unwrap()
        };
        let (fp, fm) = (shift(eps), shift(-eps));
        for i in 0..8 {
            let approx = (fp[i] - fm[i]) / (2.0 * eps);
            assert!((approx - d[2][i]).norm() < 1e-6 * (1.0 + d[2][i].norm()));
        }
    }

    #[test]
    fn gamma_zero_asymptotic_state() {
        let st = asymptotic_state(6.0, ModelParams::new(0.0, 1.0).unwrap()).unwrap();
        let (p0, q0) = beta_zero_p0_q0(1.0);
        assert!((st.p0.re - p0).abs() < 1e-15 && (st.q0.re - q0).abs() < 1e-15);
        assert!(st.p1.norm() == 0.0 && st.p2.norm() == 0.0 && st.p3.norm() == 0.0);
    }

    #[test]
    fn simpson_integrates_cubic_exactly() {
        for n in [4usize, 7] {
            let h = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(3)).collect();
            assert!((simpson(&y, h) - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn interp_mid_is_exact_for_quintics() {
        let vals: Vec<[C; 1]> = (0..10).map(|i| [c((i as f64).powi(5), 0.0)]).collect();
        for i in [0, 4, 8] {
            let x = i as f64 + 0.5;
            assert!((interp_mid(&vals, i)[0].re - x.powi(5)).abs() < 1e-9);
        }
    }
}
