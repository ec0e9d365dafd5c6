//! Benchmark fixtures shared by the criterion targets.

use elliptica::{EllipticParams, C64};

/// Generic rank-two parameters used by the kernel benchmarks.
pub fn rank_two_params() -> EllipticParams {
    EllipticParams::unstarred(C64::new(0.6, 0.0), C64::new(-0.5, 0.0), 2).expect("valid parameters")
}

/// Spectral sample away from the poles of the weights.
pub fn sample_z() -> C64 {
    C64::new(0.83, 0.27)
}
