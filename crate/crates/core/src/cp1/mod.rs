//! Line bundles and vector bundles on the projective line.

pub mod bundle;
pub mod laurent;
pub mod matrix;
pub mod quotient;
pub mod section;

use thiserror::Error;

pub use bundle::{bundle_h0, splitting_type, BundleLiteral, BundleOnP1, SplittingType};
pub use laurent::LaurentPolynomial;
pub use matrix::LaurentMatrix;
pub use quotient::quotient_bundle;
pub use section::{line_bundle_cohomology, LineBundleSection, LineCohomology, RealCohomology};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BundleError {
    #[error("section of O({degree}) needs {expected} coefficients, got {found}")]
    SectionLength {
        degree: i64,
        expected: usize,
        found: usize,
    },
    #[error("exponent {exponent} does not fit a section of O({degree})")]
    SectionExponent { degree: i64, exponent: i64 },
    #[error("O({0}) has no compatible real structure: degree is odd")]
    OddDegreeReality(i64),
    #[error("transition matrix must be square and nonempty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid transition matrix: determinant {0} is not a nonzero monomial")]
    InvalidTransition(String),
    #[error("splitting type could not be recovered: {0}")]
    SplittingInconsistent(String),
    #[error("embedding degenerates: the sections have a common zero on the projective line")]
    EmbeddingDegenerates,
    #[error("embedding is not injective: all sections vanish identically")]
    NotInjective,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
}
