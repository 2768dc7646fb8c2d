//! Splitting-type arithmetic for twistor actions and twistor quotients.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cp1::{quotient_bundle, BundleError, LineBundleSection, SplittingType};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuotientError {
    #[error("scenario has no subgroup splitting")]
    MissingSubgroup,
    #[error("scenario has no embedding data")]
    MissingEmbedding,
    #[error("admissibility of the embedding needs a trivial group, got degrees {0:?}")]
    NontrivialGroup(Vec<i64>),
    #[error("embedding check supports a line subbundle only, got rank {0}")]
    UnsupportedSubgroupRank(usize),
    #[error("embedding has {found} components but the group has rank {expected}")]
    EmbeddingRank { expected: usize, found: usize },
    #[error("embedding components must be sections of O({expected}), found O({found})")]
    EmbeddingDegree { expected: i64, found: i64 },
    #[error("negative dimension: group dimension {m} exceeds manifold dimension {n}")]
    NegativeDimension { n: usize, m: usize },
    #[error("deformation space needs a negative group, found summand O({0})")]
    NonNegativeDegree(i64),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// A twistor group acting on a hyperkähler manifold of quaternionic
/// dimension `n`, with an optional subgroup embedded in it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientScenario {
    pub n: usize,
    pub lie_g: SplittingType,
    #[serde(default)]
    pub lie_h: Option<SplittingType>,
    /// Components `q_i` of `Lie(H) = O(−r) → O^m`, one section of O(r) each.
    #[serde(default)]
    pub embedding: Option<Vec<LineBundleSection>>,
    #[serde(default)]
    pub hamiltonian: bool,
    /// Invariance of the moment value along the section cannot be checked
    /// from splitting data; the caller asserts it.
    #[serde(default)]
    pub moment_invariant_asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintFailure {
    pub constraint: String,
    pub bound: i64,
    pub offending: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    pub locally_free_feasible: bool,
    pub hamiltonian_required: bool,
    pub hamiltonian_feasible: bool,
    pub feasible: bool,
    pub failures: Vec<ConstraintFailure>,
}

/// A locally free action needs every summand of `Lie(G)` of degree at most
/// one, a Hamiltonian one at most zero.
pub fn check_action_constraints(s: &QuotientScenario) -> ActionReport {
    let over = |bound: i64| -> Vec<i64> { s.lie_g.degrees().iter().copied().filter(|&a| a > bound).collect() };
    let mut failures = Vec::new();
    let lf = over(1);
    if !lf.is_empty() {
        failures.push(ConstraintFailure {
            constraint: "locally free action: summands of degree at most 1".into(),
            bound: 1,
            offending: lf.clone(),
        });
    }
    let ham = over(0);
    if s.hamiltonian && !ham.is_empty() {
        failures.push(ConstraintFailure {
            constraint: "Hamiltonian action: summands of degree at most 0".into(),
            bound: 0,
            offending: ham.clone(),
        });
    }
    let locally_free_feasible = lf.is_empty();
    let hamiltonian_feasible = ham.is_empty();
    ActionReport {
        locally_free_feasible,
        hamiltonian_required: s.hamiltonian,
        hamiltonian_feasible,
        feasible: locally_free_feasible && (!s.hamiltonian || hamiltonian_feasible),
        failures,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Quotient `Lie(G)/Lie(H)` is a sum of O(1): the section stays admissible.
    Admissible,
    /// Some summand of the quotient has degree above one.
    Inadmissible,
    /// Neither the sufficient nor the necessary condition decides.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCondition {
    /// `Σ p_i` for `Lie(H) = ⊕ O(−p_i)`.
    pub degree_sum: i64,
    /// Fiber codimension of H in G.
    pub codimension: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub numeric: NumericCondition,
    pub quotient_splitting: SplittingType,
    /// Every quotient summand has degree exactly one.
    pub sufficient_holds: bool,
    /// No quotient summand has degree above one.
    pub necessary_holds: bool,
    /// `deg(Lie(G)/Lie(H)) = deg Lie(G) − deg Lie(H)`.
    pub degree_additivity_holds: bool,
    pub moment_invariant_asserted: bool,
    pub verdict: Verdict,
}

/// Numeric necessary condition `Σ p_i = d` for `Lie(H) = ⊕ O(−p_i)`.
pub fn numeric_condition(lie_g: &SplittingType, lie_h: &SplittingType) -> NumericCondition {
    let degree_sum = -lie_h.degree();
    let codimension = lie_g.rank() as i64 - lie_h.rank() as i64;
    NumericCondition {
        degree_sum,
        codimension,
        holds: degree_sum == codimension,
    }
}

/// Decides admissibility for a line subbundle `O(−r)` of a trivial group
/// from the splitting type of the quotient bundle.
pub fn admissibility_check(s: &QuotientScenario) -> Result<AdmissibilityReport, QuotientError> {
    let lie_h = s.lie_h.as_ref().ok_or(QuotientError::MissingSubgroup)?;
    let q = s.embedding.as_ref().ok_or(QuotientError::MissingEmbedding)?;
    if s.lie_g.degrees().iter().any(|&a| a != 0) {
        return Err(QuotientError::NontrivialGroup(s.lie_g.degrees().to_vec()));
    }
    if lie_h.rank() != 1 {
        return Err(QuotientError::UnsupportedSubgroupRank(lie_h.rank()));
    }
    if q.len() != s.lie_g.rank() {
        return Err(QuotientError::EmbeddingRank {
            expected: s.lie_g.rank(),
            found: q.len(),
        });
    }
    let r = -lie_h.degrees()[0];
    if let Some(bad) = q.iter().find(|sec| sec.degree != r) {
        return Err(QuotientError::EmbeddingDegree {
            expected: r,
            found: bad.degree,
        });
    }
    let numeric = numeric_condition(&s.lie_g, lie_h);
    let quotient_splitting = quotient_bundle(q)?.splitting_type()?;
    let sufficient_holds = quotient_splitting.degrees().iter().all(|&a| a == 1);
    let necessary_holds = quotient_splitting.degrees().iter().all(|&a| a <= 1);
    let degree_additivity_holds = quotient_splitting.degree() == s.lie_g.degree() - lie_h.degree();
    let verdict = if sufficient_holds {
        Verdict::Admissible
    } else if !necessary_holds {
        Verdict::Inadmissible
    } else {
        Verdict::Undetermined
    };
    Ok(AdmissibilityReport {
        numeric,
        quotient_splitting,
        sufficient_holds,
        necessary_holds,
        degree_additivity_holds,
        moment_invariant_asserted: s.moment_invariant_asserted,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedNormalReport {
    pub rank: i64,
    pub degree: i64,
    /// A sum of O(1)'s has degree equal to its rank.
    pub degree_matches_rank: bool,
    /// Present when the caller supplied the splitting of the reduced bundle.
    pub all_degree_one: Option<bool>,
    /// The supplied splitting has the rank and degree forced by the others.
    pub supplied_consistent: Option<bool>,
}

/// Degree arithmetic for `L^⊥/(L ∩ L^⊥)` from splittings of `L ∩ L^⊥` and
/// `L^⊥`, for groups where the quotient bundle is not computed directly.
pub fn reduced_normal_check(
    intersection: &SplittingType,
    perp: &SplittingType,
    reduced: Option<&SplittingType>,
) -> ReducedNormalReport {
    let rank = perp.rank() as i64 - intersection.rank() as i64;
    let degree = perp.degree() - intersection.degree();
    ReducedNormalReport {
        rank,
        degree,
        degree_matches_rank: rank >= 0 && degree == rank,
        all_degree_one: reduced.map(|r| r.degrees().iter().all(|&a| a == 1)),
        supplied_consistent: reduced.map(|r| r.rank() as i64 == rank && r.degree() == degree),
    }
}

/// Real dimension `4n − 4m` of the quotient of a `4n`-dimensional manifold by
/// an `m`-dimensional twistor group.
pub fn quotient_dimension(n: usize, m: usize) -> Result<usize, QuotientError> {
    if m > n {
        return Err(QuotientError::NegativeDimension { n, m });
    }
    Ok(4 * (n - m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationDim {
    pub dim: usize,
    /// Some summand has odd degree, where the real form of H¹ is counted
    /// with its full real dimension.
    pub parity_sensitive: bool,
}

/// `Σ max(0, −p_i − 1)`, the real dimension of `H¹_ℝ(Lie(N))`.
pub fn deformation_space_dim(lie_n: &SplittingType) -> Result<DeformationDim, QuotientError> {
    if let Some(&p) = lie_n.degrees().iter().find(|&&p| p >= 0) {
        return Err(QuotientError::NonNegativeDegree(p));
    }
    Ok(DeformationDim {
        dim: lie_n.degrees().iter().map(|&p| (-p - 1).max(0) as usize).sum(),
        parity_sensitive: lie_n.degrees().iter().any(|p| p % 2 != 0),
    })
}
