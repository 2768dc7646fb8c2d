//! Vector bundles on the projective line given by a single transition matrix.
//!
//! A bundle of rank `n` is glued from trivial pieces over the charts ζ ≠ ∞ and
//! ζ ≠ 0. A global section is a polynomial vector `s(ζ)` whose image `T(ζ)s(ζ)`
//! is a polynomial in `1/ζ`. With this convention O(k) has transition `ζ^{−k}`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::LaurentMatrix;
use super::BundleError;
use crate::linalg::{kernel_dim, RANK_TOL};

/// Relative tolerance for recognising the determinant as a monomial and for
/// cleaning round-off out of the inverse transition.
const MONOMIAL_TOL: f64 = 1e-9;
const INVERSE_TRIM: f64 = 1e-12;

/// Degrees `a_1 ≥ … ≥ a_n` of the Grothendieck decomposition `⊕ O(a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Self(degrees)
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn min(&self) -> Option<i64> {
        self.0.last().copied()
    }

    /// `h⁰(E ⊗ O(m)) = Σ max(0, a_i + m + 1)`.
    pub fn h0_twisted(&self, m: i64) -> usize {
        self.0.iter().map(|&a| (a + m + 1).max(0) as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl From<Vec<i64>> for SplittingType {
    fn from(v: Vec<i64>) -> Self {
        Self::new(v)
    }
}

impl From<SplittingType> for Vec<i64> {
    fn from(s: SplittingType) -> Self {
        s.0
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| format!("O({a})")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// A holomorphic vector bundle over the projective line.
#[derive(Clone, Debug)]
pub struct BundleOnP1 {
    transition: LaurentMatrix,
    inverse: LaurentMatrix,
    det: (Complex64, i64),
}

impl BundleOnP1 {
    /// Validates the transition: it must be square, nonempty, and have a
    /// nonzero monomial determinant `c·ζ^d`.
    pub fn new(transition: LaurentMatrix) -> Result<Self, BundleError> {
        if transition.nrows() == 0 || !transition.is_square() {
            return Err(BundleError::NotSquare {
                rows: transition.nrows(),
                cols: transition.ncols(),
            });
        }
        let det = transition.det();
        let (c, d) = det
            .as_monomial(MONOMIAL_TOL)
            .ok_or_else(|| BundleError::InvalidTransition(det.to_string()))?;
        let inverse = transition
            .adjugate()
            .map(|p| p.shift(-d).scale(c.inv()))
            .trimmed(INVERSE_TRIM);
        Ok(Self { transition, inverse, det: (c, d) })
    }

    /// `⊕ O(a_i)` in the standard diagonal form.
    pub fn split(degrees: &[i64]) -> Self {
        let exps: Vec<i64> = degrees.iter().map(|a| -a).collect();
        Self::new(LaurentMatrix::diagonal_powers(&exps)).expect("diagonal monomials are invertible")
    }

    pub fn transition(&self) -> &LaurentMatrix {
        &self.transition
    }

    pub fn inverse_transition(&self) -> &LaurentMatrix {
        &self.inverse
    }

    pub fn rank(&self) -> usize {
        self.transition.nrows()
    }

    /// Degree of the bundle, `−d` for `det T = c·ζ^d`.
    pub fn degree(&self) -> i64 {
        -self.det.1
    }

    /// `E ⊗ O(m)`.
    pub fn twist(&self, m: i64) -> Self {
        Self {
            transition: self.transition.shift(-m),
            inverse: self.inverse.shift(m),
            det: (self.det.0, self.det.1 - m * self.rank() as i64),
        }
    }

    /// The dual bundle, transition `(T⁻¹)ᵀ`.
    pub fn dual(&self) -> Self {
        Self {
            transition: self.inverse.transpose(),
            inverse: self.transition.transpose(),
            det: (self.det.0.inv(), -self.det.1),
        }
    }

    /// Left/right gauge change `B(1/ζ)·T·A(ζ)`. The result is validated again.
    pub fn gauge(&self, left: &LaurentMatrix, right: &LaurentMatrix) -> Result<Self, BundleError> {
        Self::new(&(left * &self.transition) * right)
    }

    /// Exponent bound for global sections: every section of this bundle is a
    /// polynomial of degree at most `max exponent of T⁻¹`.
    fn section_degree_bound(&self) -> Option<i64> {
        self.inverse.max_exponent()
    }

    /// Matrix of `s ↦ positive part of T·s` on polynomial vectors of degree
    /// at most `bound`.
    fn positive_part_map(&self, bound: i64) -> DMatrix<Complex64> {
        let n = self.rank();
        let cols = n * (bound as usize + 1);
        let top = self.transition.max_exponent().unwrap_or(0) + bound;
        let nrows_per = top.max(0) as usize;
        let mut m = DMatrix::zeros(n * nrows_per, cols);
        for i in 0..n {
            for j in 0..n {
                for (e, c) in self.transition.get(i, j).terms() {
                    for b in 0..=bound {
                        let out = e + b;
                        if out >= 1 {
                            let r = i * nrows_per + (out - 1) as usize;
                            let col = j * (bound as usize + 1) + b as usize;
                            m[(r, col)] += c;
                        }
                    }
                }
            }
        }
        m
    }

    /// Kernel dimension of the positive-part map at an explicit degree bound.
    pub fn h0_with_bound(&self, bound: i64) -> usize {
        if bound < 0 {
            return 0;
        }
        kernel_dim(&self.positive_part_map(bound), RANK_TOL)
    }

    /// Dimension of the space of global sections.
    pub fn h0(&self) -> usize {
        match self.section_degree_bound() {
            Some(bound) => self.h0_with_bound(bound),
            None => 0,
        }
    }

    /// `h¹(E) = h⁰(E* ⊗ O(−2))` by Serre duality.
    pub fn h1(&self) -> usize {
        self.dual().twist(-2).h0()
    }

    /// Grothendieck splitting type, read off from `m ↦ h⁰(E(m))`.
    ///
    /// All degrees lie in `[−max exp T, max exp T⁻¹]`, so only that window of
    /// twists is sampled. The second difference of `h⁰(E(m))` at `m` counts
    /// the summands of degree `−m`.
    pub fn splitting_type(&self) -> Result<SplittingType, BundleError> {
        let n = self.rank();
        let upper = self.inverse.max_exponent().unwrap_or(0);
        let lower = -self.transition.max_exponent().unwrap_or(0);
        if upper < lower {
            return Err(BundleError::SplittingInconsistent(format!(
                "empty degree window [{lower}, {upper}]"
            )));
        }
        let m_min = -upper - 2;
        let m_max = -lower;
        let h0: Vec<i64> = (m_min..=m_max).map(|m| self.twist(m).h0() as i64).collect();
        let at = |m: i64| h0[(m - m_min) as usize];
        // g(m) = #{a_i ≥ −m}
        let g = |m: i64| at(m) - at(m - 1);
        let mut degrees = Vec::with_capacity(n);
        for m in (m_min + 2)..=m_max {
            let count = g(m) - g(m - 1);
            if count < 0 {
                return Err(BundleError::SplittingInconsistent(format!(
                    "negative multiplicity at degree {}",
                    -m
                )));
            }
            degrees.extend(std::iter::repeat_n(-m, count as usize));
        }
        let split = SplittingType::new(degrees);
        if split.rank() != n {
            return Err(BundleError::SplittingInconsistent(format!(
                "recovered {} summands for rank {n}",
                split.rank()
            )));
        }
        if split.degree() != self.degree() {
            return Err(BundleError::SplittingInconsistent(format!(
                "summand degrees add to {} but the bundle has degree {}",
                split.degree(),
                self.degree()
            )));
        }
        Ok(split)
    }
}

/// JSON form of a bundle literal: the row-major transition matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleLiteral {
    pub transition: LaurentMatrix,
}

impl TryFrom<BundleLiteral> for BundleOnP1 {
    type Error = BundleError;
    fn try_from(lit: BundleLiteral) -> Result<Self, BundleError> {
        BundleOnP1::new(lit.transition)
    }
}

impl From<&BundleOnP1> for BundleLiteral {
    fn from(b: &BundleOnP1) -> Self {
        Self {
            transition: b.transition.clone(),
        }
    }
}

/// Convenience: `h⁰` of a bundle given by its transition matrix.
pub fn bundle_h0(transition: &LaurentMatrix) -> Result<usize, BundleError> {
    Ok(BundleOnP1::new(transition.clone())?.h0())
}

/// Convenience: splitting type of a bundle given by its transition matrix.
pub fn splitting_type(transition: &LaurentMatrix) -> Result<SplittingType, BundleError> {
    BundleOnP1::new(transition.clone())?.splitting_type()
}
