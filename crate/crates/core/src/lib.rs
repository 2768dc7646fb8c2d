//! Computational tools for twistor constructions of hyperkähler metrics.
//!
//! * [`cp1`]: Laurent polynomials, sections of O(k), bundles on the projective
//!   line and their splitting types.
//! * [`lie`]: twistor Lie algebras, nilpotency, Campbell–Hausdorff products and
//!   the unipotent-radical family.
//! * [`quotient`]: degree arithmetic for twistor actions and quotients.
//! * [`glt`]: the generalized Legendre transform.
//! * [`monopole`]: the O(−2) action on the charge-2 centred monopole space.

pub mod cp1;
pub mod glt;
pub mod lie;
pub mod linalg;
pub mod monopole;
pub mod quotient;

pub use cp1::{
    bundle_h0, line_bundle_cohomology, quotient_bundle, splitting_type, BundleError, BundleOnP1,
    LaurentMatrix, LaurentPolynomial, LineBundleSection, LineCohomology, RealCohomology,
    SplittingType,
};
pub use glt::{GltError, GltProblem, GridSpec, SectionPoint, Term};
pub use lie::{LieError, LieLiteral, SimpleAlgebra, TwistorLieAlgebra};
pub use monopole::{MonopoleError, OrbitParameter, RationalMapPoint};
pub use quotient::{QuotientError, QuotientScenario, Verdict};
