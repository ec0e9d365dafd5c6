use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("product base has modulus {modulus} >= 1; the product diverges")]
    DivergentBase { modulus: f64 },

    #[error("truncation did not converge within {max_terms} terms")]
    NonConvergence { max_terms: usize },

    #[error("zero argument is outside the domain of {context}")]
    ZeroArgument { context: &'static str },

    #[error("pole proximity in {context}: denominator magnitude {magnitude:e}")]
    PoleProximity { context: &'static str, magnitude: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("surface condition for labels ({ell}, {ell_prime}) violated: relative residual {residual:e}")]
    SurfaceViolation {
        ell: i64,
        ell_prime: i64,
        residual: f64,
    },

    #[error("surface condition has no solution: {0}")]
    Inconsistent(String),

    #[error("degenerate surface (equal labels): forced central charge c = {c}")]
    Degenerate { c: String },

    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
