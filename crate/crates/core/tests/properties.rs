//! Property-based checks of structural invariants across the library.

use num_complex::Complex64;
use pearcey::chf::{chf_jump_residual, det_constancy};
use pearcey::fredholm::fredholm_logdet;
use pearcey::hamiltonian::{hamiltonian_value, system_rhs, HamState};
use pearcey::kernel::{kernel_rational, kernel_rh};
use pearcey::pearcey_fn::{pearcey_p, pearcey_q};
use pearcey::specfun::{barnes_ln_g, gamma, ln_gamma};
use pearcey::ModelParams;
use proptest::prelude::*;
use std::f64::consts::PI;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn p_is_even_with_odd_derivative(x in -8.0f64..8.0, rho in -2.0f64..2.0) {
        let a = pearcey_p(x, rho).unwrap();
        let b = pearcey_p(-x, rho).unwrap();
        prop_assert!((a.v0.0 - b.v0.0).abs() < 1e-12);
        prop_assert!((a.v1.0 + b.v1.0).abs() < 1e-12);
        prop_assert!((a.v2.0 - b.v2.0).abs() < 1e-12);
    }

    #[test]
    fn q_is_odd_with_even_derivative(y in -8.0f64..8.0, rho in -2.0f64..2.0) {
        let a = pearcey_q(y, rho).unwrap();
        let b = pearcey_q(-y, rho).unwrap();
        let scale = 1.0 + a.v0.0.abs() + a.v1.0.abs();
        prop_assert!((a.v0.0 + b.v0.0).abs() < 1e-11 * scale);
        prop_assert!((a.v1.0 - b.v1.0).abs() < 1e-11 * scale);
    }

    #[test]
    fn gamma_reflection(re in -2.5f64..2.5, im in -2.0f64..2.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn barnes_recurrence(re in 0.2f64..3.0, im in -1.5f64..1.5) {
        // G(1 + z) = Γ(z) G(z)
        let z = c(re, im);
        let d = barnes_ln_g(1.0 + z).unwrap() - ln_gamma(z).unwrap() - barnes_ln_g(z).unwrap();
        let wrapped = c(d.re, (d.im + PI).rem_euclid(2.0 * PI) - PI);
        prop_assert!(wrapped.norm() < 1e-10);
    }

    #[test]
    fn hamilton_equations_hold_on_the_constraint_surface(
        v in proptest::collection::vec(-1.0f64..1.0, 14),
        s in 0.5f64..8.0,
    ) {
        // Random state with Σ₁³pₖqₖ = 0 (p₃ solved for).
        let z = |i: usize| c(v[2 * i], v[2 * i + 1]);
        let (p0, p1, p2, q0, q1, q2, q3) = (z(0), z(1), z(2), z(3), z(4), z(5), z(6));
        prop_assume!(q3.norm() > 0.2);
        let p3 = -(p1 * q1 + p2 * q2) / q3;
        let st = HamState { p0, p1, p2, p3, q0, q1, q2, q3, s };
        let rhs = system_rhs(&st).unwrap();
        let y = st.to_array();
        let h = 1e-6;
        for k in 0..8 {
            let mut up = y;
            let mut dn = y;
            up[k] += h;
            dn[k] -= h;
            let d = (hamiltonian_value(&HamState::from_array(s, up)).unwrap()
                - hamiltonian_value(&HamState::from_array(s, dn)).unwrap())
                / (2.0 * h);
            // p′ = −∂H/∂q, q′ = ∂H/∂p
            let want = if k < 4 { rhs[k + 4] } else { -rhs[k - 4] };
            prop_assert!((d - want).norm() < 1e-7 * (1.0 + want.norm()), "k = {}: {} vs {}", k, d, want);
        }
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn rational_and_rh_kernels_agree(x in -4.0f64..4.0, y in -4.0f64..4.0, rho in -1.5f64..1.5) {
        prop_assume!((x - y).abs() > 0.05);
        let a = kernel_rational(x, y, rho).unwrap();
        let b = kernel_rh(x, y, rho).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn log_determinant_is_negative_and_monotone_in_gamma(s in 0.2f64..4.0, g in 0.05f64..0.9, rho in -1.0f64..1.0) {
        let f1 = fredholm_logdet(s, ModelParams::new(g, rho).unwrap(), 48).unwrap().f;
        let f2 = fredholm_logdet(s, ModelParams::new(g + 0.05, rho).unwrap(), 48).unwrap().f;
        prop_assert!(f1 < 0.0);
        prop_assert!(f2 < f1);
    }

    #[test]
    fn chf_jumps_hold(ray in 1usize..=6, r in 0.1f64..10.0, beta in -0.5f64..0.5) {
        let res = chf_jump_residual(ray, r, c(0.0, beta)).unwrap();
        prop_assert!(res < 1e-9, "ray {} r {} beta {}: {}", ray, r, beta, res);
    }

    #[test]
    fn chf_determinant_is_constant(r1 in 0.2f64..6.0, a1 in 0.0f64..6.28, r2 in 0.2f64..6.0, a2 in 0.0f64..6.28, beta in -0.5f64..0.5) {
        let z1 = Complex64::from_polar(r1, a1);
        let z2 = Complex64::from_polar(r2, a2);
        let on_ray = |a: f64| [0.0, PI / 6.0, 5.0 * PI / 6.0, PI, 7.0 * PI / 6.0, 11.0 * PI / 6.0, 2.0 * PI]
            .iter()
            .any(|t| (a - t).abs() < 1e-6);
        prop_assume!(!on_ray(a1) && !on_ray(a2));
        prop_assert!(det_constancy(z1, z2, c(0.0, beta)).unwrap() < 1e-9);
    }
}
