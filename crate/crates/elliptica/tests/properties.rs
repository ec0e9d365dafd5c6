//! Randomized invariants across modules.

use num_rational::Ratio;
use proptest::prelude::*;

use elliptica::exchange::f_func;
use elliptica::linalg::{rel_residual, rel_scalar};
use elliptica::rmatrix_gl2::{tau_tilde, w_matrix};
use elliptica::specfun::{jacobi_theta_product, jacobi_theta_series, theta_p};
use elliptica::surfaces::{enumerate_surfaces, params_on_surface, solve_exponent, surface_check};
use elliptica::{ComplexMatrix, EllipticParams, LabelPair, RationalCharacteristic, SurfaceKind, TruncationPolicy, C64};

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn polar(r: f64, t: f64) -> C64 {
    C64::from_polar(r, t)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, .. ProptestConfig::default() })]

    #[test]
    fn theta_inversion_and_shift(r in 0.1f64..5.0, t in -3.1f64..3.1, pr in 0.05f64..0.5, pt in -3.1f64..3.1) {
        let z = polar(r, t);
        let p = polar(pr, pt);
        let th = theta_p(z, p, &pol()).unwrap();
        let inv = theta_p(z.inv(), p, &pol()).unwrap();
        let shifted = theta_p(p * z, p, &pol()).unwrap();
        prop_assert!(rel_scalar(inv, -th / z) < 1e-10);
        prop_assert!(rel_scalar(shifted, -th / z) < 1e-10);
    }

    #[test]
    fn theta_series_matches_product(
        n in 2i64..=4, j in 0i64..4, k in 0i64..4,
        xr in -0.5f64..0.5, xi in -0.1f64..0.1, tr in -0.5f64..0.5, ti in 0.3f64..1.0,
    ) {
        let ch = RationalCharacteristic::half_shifted(j % n, k % n, n);
        let x = C64::new(xr, xi);
        let tau = C64::new(tr, ti);
        let a = jacobi_theta_series(&ch, x, tau, &pol()).unwrap();
        let b = jacobi_theta_product(&ch, x, tau, &pol()).unwrap();
        prop_assert!(rel_scalar(a, b) < 1e-10);
    }

    #[test]
    fn eight_vertex_unitarity(r in 0.5f64..2.0, t in -3.1f64..3.1, q in 0.3f64..0.7, s in 0.2f64..0.6) {
        let params = EllipticParams::unstarred(C64::new(q, 0.0), C64::new(-s, 0.0), 2).unwrap();
        let z = polar(r, t);
        let prod = w_matrix(z, &params, &pol()).unwrap().mul(&w_matrix(z.inv(), &params, &pol()).unwrap().flip_factors(2));
        prop_assert!(rel_residual(&prod, &ComplexMatrix::identity(4)) < 1e-9);
    }

    #[test]
    fn f_reflection_and_periodicity(ell in 1i64..=3, r in 0.5f64..2.0, t in -3.1f64..3.1) {
        let params = EllipticParams::unstarred(C64::new(0.6, 0.0), C64::new(-0.5, 0.0), 2).unwrap();
        let z = polar(r, t);
        let lhs = f_func(ell, z, &params, false, &pol()).unwrap() * f_func(-ell, z.inv(), &params, false, &pol()).unwrap();
        let shifted = params.s.powi(-(ell as i32)) * z;
        let rhs = tau_tilde(shifted, &params, &pol()).unwrap() / tau_tilde(z, &params, &pol()).unwrap();
        prop_assert!(rel_scalar(lhs, rhs) < 1e-9);
        let q2 = params.q * params.q;
        let a = f_func(ell, q2 * z, &params, false, &pol()).unwrap();
        let b = f_func(ell, z, &params, false, &pol()).unwrap();
        prop_assert!(rel_scalar(a, b) < 1e-9);
    }

    /// Whenever the exponent equation has a solution and some sign of s
    /// admits s*, every generated point satisfies the surface condition.
    #[test]
    fn solve_then_check(
        ell in -6i64..=6, ell_prime in -6i64..=6, n in 2usize..=3,
        c in prop::sample::select(vec![Ratio::new(1, 1), Ratio::new(2, 1), Ratio::new(1, 2)]),
    ) {
        let labels = LabelPair::new(ell, ell_prime);
        if solve_exponent(labels, c, n).is_ok() {
            if let Ok(points) = params_on_surface(labels, c, n, C64::new(0.7, 0.0)) {
                for p in points {
                    prop_assert!(surface_check(labels, &p, SurfaceKind::T).is_ok());
                }
            }
        }
    }
}

#[test]
fn mirrored_labels_appear_on_the_s_side() {
    let params = elliptica::surfaces::c1_p_q3(0.55);
    let found = enumerate_surfaces(&params, -8..=8, -25..=25);
    let t: Vec<LabelPair> = found.iter().filter(|s| s.kind == SurfaceKind::T).map(|s| s.labels).collect();
    let s: Vec<LabelPair> = found.iter().filter(|s| s.kind == SurfaceKind::S).map(|s| s.labels).collect();
    assert!(!t.is_empty());
    for l in &t {
        if (-8..=8).contains(&-l.ell) && (-25..=25).contains(&-l.ell_prime) {
            assert!(s.contains(&l.mirrored()), "{l:?}");
        }
    }
    for l in &s {
        assert!(t.contains(&l.mirrored()), "{l:?}");
    }
}
