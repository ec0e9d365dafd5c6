//! Numerical toolkit for elliptic R-matrices and the exchange algebra built on
//! them: q-Pochhammer and theta functions, the eight-vertex and Z_N Belavin
//! R-matrices, shift-accumulation and structure functions on surface
//! conditions, splitting factors, the β → 0 limit, and vertex-operator
//! coefficient functions. Every identity is exposed as a sampled check
//! returning a [`VerificationReport`].

// `!(x > 0.0)` deliberately treats NaN as out of range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod exchange;
pub mod linalg;
pub mod params;
pub mod policy;
pub mod report;
pub mod rhsplit;
pub mod rmatrix_gl2;
pub mod rmatrix_gln;
pub mod sampling;
pub mod specfun;
pub mod surfaces;
pub mod sweep;
pub mod vertexcoeffs;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use params::EllipticParams;
pub use policy::TruncationPolicy;
pub use report::{Coord, SamplePoint, VerificationReport};
pub use specfun::{RationalCharacteristic, C64};
pub use surfaces::{LabelPair, SurfaceKind, SurfaceSpec};
