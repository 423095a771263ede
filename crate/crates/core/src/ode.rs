//! Explicit Runge–Kutta integrators for small complex systems.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// State vector of a complex ODE system.
pub type CVec = Vec<Complex64>;

fn axpy(y: &[Complex64], h: f64, terms: &[(f64, &CVec)]) -> CVec {
    let mut out = y.to_vec();
    for (c, k) in terms {
        let f = h * c;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += *ki * f;
        }
    }
    out
}

/// One classical fourth-order Runge–Kutta step of size `h` (which may be
/// negative).
pub fn rk4_step<F>(f: &mut F, s: f64, y: &[Complex64], h: f64) -> Result<CVec>
where
    F: FnMut(f64, &[Complex64]) -> Result<CVec>,
{
    let k1 = f(s, y)?;
    let k2 = f(s + h / 2.0, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = f(s + h / 2.0, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = f(s + h, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]))
}

/// Controls for the adaptive Dormand–Prince 5(4) integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    /// Relative tolerance.
    pub rtol: f64,
    /// Absolute floor.
    pub atol: f64,
    /// Largest permitted |step|.
    pub max_step: f64,
    /// Smallest permitted |step| before a step failure is reported.
    pub min_step: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, max_step: 0.05, min_step: 1e-12 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate from `s0` to `s1` (either direction) with adaptive
/// Dormand–Prince 5(4) steps, calling `observe(s, y)` after each accepted
/// step; `observe` may abort the integration by returning an error.
pub fn dopri5<F, O>(f: &mut F, s0: f64, y0: &[Complex64], s1: f64, opts: AdaptiveOptions, mut observe: O) -> Result<CVec>
where
    F: FnMut(f64, &[Complex64]) -> Result<CVec>,
    O: FnMut(f64, &[Complex64]) -> Result<()>,
{
    let dir = if s1 >= s0 { 1.0 } else { -1.0 };
    let mut s = s0;
    let mut y = y0.to_vec();
    let mut h = dir * opts.max_step.min((s1 - s0).abs()).min(0.01);
    let mut k1 = f(s, &y)?;
    while (s1 - s) * dir > 0.0 {
        if (s + h - s1) * dir > 0.0 {
            h = s1 - s;
        }
        let k2 = f(s + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
        let k3 = f(s + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(s + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = f(s + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = f(s + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(s + h, &y_new)?;
        let err_vec = axpy(&vec![Complex64::new(0.0, 0.0); y.len()], h, &[
            (E1, &k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ]);
        let err = (err_vec
            .iter()
            .zip(y.iter().zip(&y_new))
            .map(|(e, (a, b))| (e.norm() / (opts.atol + opts.rtol * a.norm().max(b.norm()))).powi(2))
            .sum::<f64>()
            / y.len() as f64)
            .sqrt();
        if !err.is_finite() {
            return Err(Error::StepFailure { s });
        }
        if err <= 1.0 {
            s += h;
            y = y_new;
            k1 = k7;
            observe(s, &y)?;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = dir * (h.abs() * factor).min(opts.max_step);
        if h.abs() < opts.min_step {
            return Err(Error::StepFailure { s });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(_s: f64, y: &[Complex64]) -> Result<CVec> {
        Ok(vec![y[1], -y[0]])
    }

    #[test]
    fn dopri_solves_harmonic_oscillator() {
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let y = dopri5(&mut harmonic, 0.0, &y0, 10.0, AdaptiveOptions::default(), |_, _| Ok(())).unwrap();
        assert!((y[0].re - 10f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn dopri_runs_backwards() {
        let y0 = [Complex64::new(10f64.cos(), 0.0), Complex64::new(-10f64.sin(), 0.0)];
        let y = dopri5(&mut harmonic, 10.0, &y0, 0.0, AdaptiveOptions::default(), |_, _| Ok(())).unwrap();
        assert!((y[0].re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let mut f = |_s: f64, y: &[Complex64]| -> Result<CVec> { Ok(vec![y[0] * Complex64::i()]) };
        let mut err = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = vec![Complex64::new(1.0, 0.0)];
            for k in 0..n {
                y = rk4_step(&mut f, k as f64 * h, &y, h).unwrap();
            }
            (y[0] - Complex64::i().exp()).norm()
        };
        let ratio = err(10) / err(20);
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }
}
