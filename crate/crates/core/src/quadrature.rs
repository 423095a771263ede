//! Gauss–Legendre rules and composite panel quadrature.

use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// A quadrature rule on (−1, 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    /// Nodes, strictly increasing and symmetric about 0.
    pub nodes: Vec<f64>,
    /// Positive weights summing to 2.
    pub weights: Vec<f64>,
    /// Number of nodes.
    pub order: usize,
}

impl QuadratureRule {
    /// Map the rule to `(a, b)`, returning `(nodes, weights)`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        let x = self.nodes.iter().map(|t| m + h * t).collect();
        let w = self.weights.iter().map(|w| h * w).collect();
        (x, w)
    }
}

/// Evaluate the Legendre polynomial `P_n(x)` and its derivative by the
/// three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes and weights of order `n` (1 ≤ n ≤ 2048).
///
/// Nodes come from Newton iteration on the recurrence-evaluated polynomial,
/// started from the Chebyshev-like initial guess; weights are
/// `2 / ((1 − x²) P′ₙ(x)²)`.
///
/// # Panics
/// Panics when `n` is outside `1..=2048`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!((1..=2048).contains(&n), "gauss_legendre: order {n} outside 1..=2048");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th root counted from the right end.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights, order: n }
}

/// The 12-point rule used by all panel quadratures, computed once.
pub(crate) fn gl12() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(12))
}

/// Width of one composite panel.
pub const PANEL_WIDTH: f64 = 0.2;

/// Composite 12-point Gauss–Legendre nodes on `[a, b]` with panels of
/// width at most `width`.
pub fn composite_panels(a: f64, b: f64, width: f64) -> (Vec<f64>, Vec<f64>) {
    let rule = gl12();
    let panels = (((b - a) / width).ceil() as usize).max(1);
    let step = (b - a) / panels as f64;
    let mut x = Vec::with_capacity(panels * rule.order);
    let mut w = Vec::with_capacity(panels * rule.order);
    for k in 0..panels {
        let lo = a + step * k as f64;
        let h = 0.5 * step;
        let m = lo + h;
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            x.push(m + h * t);
            w.push(h * wt);
        }
    }
    (x, w)
}

/// Truncation radius for an integrand whose log-modulus along a ray is
/// `−r⁴/4 + a r² + b r` (r ≥ 0): the first r beyond the maximiser where the
/// exponent has fallen 45 units (≈ e⁻⁴⁵ ≈ 3e−20) below its maximum.
pub fn ray_cutoff(a: f64, b: f64) -> f64 {
    let h = |r: f64| -0.25 * r.powi(4) + a * r * r + b * r;
    let step = 0.01;
    let mut best_r = 0.0;
    let mut best = h(0.0);
    let mut r = 0.0;
    // The quartic dominates beyond this radius for all admissible a, b.
    let r_max = 2.0 + 2.0 * a.abs().sqrt() + 2.0 * b.abs().cbrt() + 10.0;
    while r <= r_max {
        let v = h(r);
        if v > best {
            best = v;
            best_r = r;
        }
        r += step;
    }
    let mut r = best_r;
    while h(r) > best - 45.0 {
        r += step;
    }
    r.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_are_analytic() {
        let r1 = gauss_legendre(1);
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);
        let r2 = gauss_legendre(2);
        assert!((r2.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((r2.weights[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let r = gauss_legendre(3);
        let v: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(4)).sum();
        assert!((v - 0.4).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        for n in [5, 16, 64, 257, 1024] {
            let r = gauss_legendre(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            for i in 0..n {
                assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() < 1e-15);
                if i > 0 {
                    assert!(r.nodes[i] > r.nodes[i - 1]);
                }
            }
        }
    }

    #[test]
    fn composite_panels_integrate_gaussian() {
        let (x, w) = composite_panels(-8.0, 8.0, PANEL_WIDTH);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x).exp()).sum();
        assert!((v - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cutoff_tracks_quartic_decay() {
        let r = ray_cutoff(0.0, 0.0);
        assert!((0.25 * r.powi(4) - 45.0).abs() < 1.0);
    }
}
