use serde::Serialize;

use crate::specfun::C64;

/// One named complex coordinate of a sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coord {
    pub name: String,
    pub value: C64,
}

/// Arguments at which one residual was measured.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SamplePoint(pub Vec<Coord>);

impl SamplePoint {
    pub fn with(mut self, name: &str, value: C64) -> Self {
        self.0.push(Coord {
            name: name.to_string(),
            value,
        });
        self
    }

    pub fn of(name: &str, value: C64) -> Self {
        Self::default().with(name, value)
    }
}

/// Outcome of checking one identity over a set of sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub seed: Option<u64>,
    pub sample_points: Vec<SamplePoint>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
    /// Findings that do not affect `passed`, such as a recorded constant.
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(
        check_name: impl Into<String>,
        seed: Option<u64>,
        sample_points: Vec<SamplePoint>,
        residuals: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        let passed = !residuals.is_empty() && residuals.iter().all(|r| *r <= tolerance);
        Self {
            check_name: check_name.into(),
            seed,
            sample_points,
            residuals,
            tolerance,
            passed,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Largest residual; NaN residuals count as infinite.
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| if r.is_nan() { f64::INFINITY } else { *r })
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {}: max residual {:.3e} (tol {:.1e}, {} samples)",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            self.max_residual(),
            self.tolerance,
            self.residuals.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_max_within_tolerance() {
        let r = VerificationReport::new("x", None, vec![], vec![1e-12, 3e-9], 1e-8);
        assert!(r.passed);
        let r = VerificationReport::new("x", None, vec![], vec![1e-12, f64::NAN], 1e-8);
        assert!(!r.passed);
        assert_eq!(r.max_residual(), f64::INFINITY);
        assert!(!VerificationReport::new("x", None, vec![], vec![], 1.0).passed);
    }
}
