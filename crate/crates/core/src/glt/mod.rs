//! Generalized Legendre transform: `F` from contour integrals over sections
//! of O(2k), its Hankel PDE system, the constrained Legendre transform and
//! the Monge–Ampère check of the resulting four-dimensional metric.

pub mod evaluate;
pub mod legendre;
pub mod problem;
pub mod quadrature;
pub mod sweep;

use thiserror::Error;

pub use evaluate::{eval_f, gradient_f, hessian_f, FValue, HessianReport};
pub use legendre::{kahler_potential_and_metric, solve_constraints, ConstrainedSection, MetricReport};
pub use problem::{epsilon, lambda_len, ContourSpec, GltProblem, SectionPoint, Term};
pub use sweep::{
    admissible_lambda_directions, deformation_sweep, monge_ampere_residual, reality_probe, GridSpec, MongeAmpereReport,
    SweepRow,
};

/// `|Im F|` above which `F` is not considered real.
pub const REALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GltError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("point violates the reality condition by {0:e}")]
    NotRealPoint(f64),
    #[error("contour too close to singularity (last refinement changed the result by {change:e})")]
    ContourSingular { change: f64 },
    #[error("F is not real on the reality locus: imaginary part {imag:e}")]
    NotReal { imag: f64 },
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("no constrained section found after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}
