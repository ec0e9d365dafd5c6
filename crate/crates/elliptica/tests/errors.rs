//! Error paths of the public API.

use elliptica::exchange::big_f;
use elliptica::specfun::{jacobi_theta, qpoch, xi};
use elliptica::surfaces::c1_p_q3;
use elliptica::{EllipticParams, Error, LabelPair, RationalCharacteristic, TruncationPolicy, C64};

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

#[test]
fn divergent_base() {
    let r = qpoch(C64::new(0.5, 0.0), &[C64::new(1.0, 0.0)], &pol());
    assert!(matches!(r, Err(Error::DivergentBase { .. })));
}

#[test]
fn non_convergence_under_tiny_cap() {
    let tight = TruncationPolicy::new(1e-16, 3, 3).unwrap();
    let r = qpoch(C64::new(0.5, 0.0), &[C64::new(0.9, 0.0)], &tight);
    assert!(matches!(r, Err(Error::NonConvergence { max_terms: 3 })));
}

#[test]
fn xi_pole_is_detected() {
    let q = C64::new(0.6, 0.0);
    let z = q.powi(-4);
    assert!(matches!(xi(z, C64::new(0.15, 0.0), q, &pol()), Err(Error::PoleProximity { .. })));
}

#[test]
fn theta_needs_upper_half_plane() {
    let ch = RationalCharacteristic::half_shifted(0, 0, 2);
    let r = jacobi_theta(&ch, C64::new(0.1, 0.0), C64::new(0.0, -0.5), &pol());
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn parameter_validation() {
    let q = C64::new(0.5, 0.0);
    assert!(EllipticParams::new(q, C64::new(-1.2, 0.0), C64::new(-0.3, 0.0), None, 2).is_err());
    assert!(EllipticParams::new(C64::new(1.0, 0.0), C64::new(-0.3, 0.0), C64::new(-0.3, 0.0), None, 2).is_err());
    assert!(EllipticParams::new(q, C64::new(-0.3, 0.0), C64::new(-0.3, 0.0), None, 1).is_err());
    // declared c must match |s*/s| = |q|^{-c}
    assert!(EllipticParams::new(q, C64::new(-0.3, 0.0), C64::new(-0.3, 0.0), Some(1.0), 2).is_err());
}

#[test]
fn structure_function_off_surface() {
    let r = big_f(LabelPair::new(2, 5), LabelPair::new(1, 7), C64::new(0.8, 0.1), &c1_p_q3(0.55), &pol());
    assert!(matches!(r, Err(Error::SurfaceViolation { ell: 2, ell_prime: 5, .. })));
}
