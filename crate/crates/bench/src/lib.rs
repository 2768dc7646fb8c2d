//! Fixed inputs shared by the benchmarks.

use num_complex::Complex64;
use twistor_core::glt::{GltProblem, GridSpec, Term};
use twistor_core::monopole::RationalMapPoint;
use twistor_core::{LaurentMatrix, LaurentPolynomial};

/// `diag(ζ^{-a_i})` mixed by fixed upper and lower unipotent gauges, so the
/// splitting has to be found by reduction.
pub fn gauged_transition(degrees: &[i64]) -> LaurentMatrix {
    let n = degrees.len();
    let t = LaurentMatrix::diagonal_powers(&degrees.iter().map(|a| -a).collect::<Vec<_>>());
    let mut left = LaurentMatrix::identity(n);
    let mut right = LaurentMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let p = LaurentPolynomial::from_terms([(0, Complex64::new(0.5, 0.1)), (-1, Complex64::new(-1.0, 0.3))]);
                left.set(i, j, p);
            } else if i > j {
                let p = LaurentPolynomial::from_terms([(1, Complex64::new(0.7, -0.2)), (2, Complex64::new(0.2, 0.0))]);
                right.set(i, j, p);
            }
        }
    }
    let lt = &left * &t;
    &lt * &right
}

/// The k = 2 family with a cubic correction.
pub fn glt_problem(lambda: f64) -> GltProblem {
    GltProblem::new(2, vec![Term::real(1.0, 2, -5), Term::real(0.3, 3, -7)]).with_lambda(vec![lambda])
}

pub fn glt_grid(n: usize) -> GridSpec {
    GridSpec {
        center_z: Complex64::new(0.2, 0.1),
        center_u: Complex64::new(0.3, -0.1),
        step_z: Complex64::new(0.05, 0.02),
        step_u: Complex64::new(-0.03, 0.05),
        n,
    }
}

pub fn monopole_point() -> RationalMapPoint {
    RationalMapPoint::from_a_c(Complex64::new(0.4, 0.2), Complex64::new(0.8, 0.3), 1.0)
}
