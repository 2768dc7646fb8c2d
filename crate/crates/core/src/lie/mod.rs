//! Twistor Lie algebras: Lie algebra bundles `⊕ O(p_i)` with polynomial
//! structure constants.

pub mod algebra;
pub mod bch;
pub mod nilpotent;
pub mod unipotent;

use thiserror::Error;

pub use algebra::{BracketEntry, LieLiteral, TwistorLieAlgebra, ValidationReport, Violation, ViolationKind};
pub use bch::{bch_inverse, bch_multiply, FiberElement};
pub use nilpotent::{maximal_negative_subalgebra, nilpotency, NegativePart, NilpotencyReport};
pub use unipotent::{unipotent_family, SimpleAlgebra, UnipotentFamily};

use crate::cp1::BundleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("structure constants are invalid: {0}")]
    Invalid(String),
    #[error("bracket index ({i}, {j}, {k}) out of range for rank {n}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, n: usize },
    #[error("conflicting entries for bracket ({i}, {j}, {k})")]
    ConflictingBracket { i: usize, j: usize, k: usize },
    #[error("negative part not a subalgebra: bracket ({i}, {j}) has a component along e{k}")]
    NotSubalgebra { i: usize, j: usize, k: usize },
    #[error("BCH does not terminate: the fiber algebra is not nilpotent")]
    NotNilpotent,
    #[error("fiber elements live over different points: {0} and {1}")]
    FiberMismatch(num_complex::Complex64, num_complex::Complex64),
    #[error("fiber element has {found} coordinates, algebra has rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("direction must be a unit vector, |v| = {0}")]
    NotUnitDirection(f64),
    #[error("non-constant stratification: negative eigenspace dimension {found} differs from {expected}")]
    NonConstantStratification { expected: usize, found: usize },
    #[error("transition of the eigenframe family could not be assembled: {0}")]
    Transition(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}
