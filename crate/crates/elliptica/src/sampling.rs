use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::specfun::C64;

/// Seeded source of sample points.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Point with `|z|` uniform in `[r_min, r_max]` and uniform phase.
    pub fn annulus(&mut self, r_min: f64, r_max: f64) -> C64 {
        let r = self.uniform(r_min, r_max);
        let t = self.uniform(0.0, 2.0 * PI);
        C64::from_polar(r, t)
    }

    /// Point in the annulus with phase restricted to `|arg| ≤ max_phase`.
    pub fn sector(&mut self, r_min: f64, r_max: f64, max_phase: f64) -> C64 {
        let r = self.uniform(r_min, r_max);
        let t = self.uniform(-max_phase, max_phase);
        C64::from_polar(r, t)
    }
}
