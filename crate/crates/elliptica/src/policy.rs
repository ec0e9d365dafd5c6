use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides [`TruncationPolicy::max_terms`].
pub const MAX_TERMS_ENV: &str = "ELLIPTICA_MAX_TERMS";

/// Relative threshold below which a denominator counts as a pole.
pub const POLE_TOL: f64 = 1e-8;

/// Stopping rule for infinite products and series.
///
/// A product stops once `consecutive_hits` successive factors differ from 1
/// by less than `term_tol`; a series stops once that many successive shells
/// contribute less than `term_tol` relative to the running sum. `max_terms`
/// caps the index along each product or summation direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub term_tol: f64,
    pub max_terms: usize,
    pub consecutive_hits: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            term_tol: 1e-16,
            max_terms: 10_000,
            consecutive_hits: 3,
        }
    }
}

impl TruncationPolicy {
    pub fn new(term_tol: f64, max_terms: usize, consecutive_hits: usize) -> Result<Self> {
        let policy = Self {
            term_tol,
            max_terms,
            consecutive_hits,
        };
        policy.validate()?;
        Ok(policy)
    }

    /// Default policy with `max_terms` taken from `ELLIPTICA_MAX_TERMS` when set.
    pub fn from_env() -> Result<Self> {
        let mut policy = Self::default();
        if let Ok(raw) = std::env::var(MAX_TERMS_ENV) {
            policy.max_terms = raw.trim().parse().map_err(|_| {
                Error::Domain(format!("{MAX_TERMS_ENV}={raw:?} is not a positive integer"))
            })?;
        }
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.term_tol > 0.0 && self.term_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "term_tol must be positive, got {}",
                self.term_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        if self.consecutive_hits == 0 {
            return Err(Error::Domain("consecutive_hits must be at least 1".into()));
        }
        Ok(())
    }
}
