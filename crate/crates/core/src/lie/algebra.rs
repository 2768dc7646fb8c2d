//! Structure constants `[e_i, e_j]_ζ = Σ_k f^{ij}_k(ζ) e_k` and their validation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LieError;
use crate::cp1::LaurentPolynomial;

/// Absolute tolerance on coefficients for the polynomial identities, scaled
/// by the size of the structure constants.
pub const IDENTITY_TOL: f64 = 1e-10;

/// A Lie algebra bundle `⊕ O(p_i)` over the projective line.
///
/// Structure constants are stored in the ζ chart only; `f^{ij}_k` is a
/// section of `O(p_i + p_j − p_k)`. Indices are zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistorLieAlgebra {
    splitting: Vec<i64>,
    brackets: BTreeMap<(usize, usize, usize), LaurentPolynomial>,
}

impl TwistorLieAlgebra {
    /// Takes the bracket table as given. Entries are summed on repetition.
    pub fn new<I>(splitting: Vec<i64>, entries: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, LaurentPolynomial)>,
    {
        let n = splitting.len();
        let mut brackets: BTreeMap<(usize, usize, usize), LaurentPolynomial> = BTreeMap::new();
        for (i, j, k, f) in entries {
            if i >= n || j >= n || k >= n {
                return Err(LieError::IndexOutOfRange { i, j, k, n });
            }
            let slot = brackets.entry((i, j, k)).or_default();
            *slot = &*slot + &f;
        }
        brackets.retain(|_, f| !f.is_zero());
        Ok(Self { splitting, brackets })
    }

    /// Fills `f^{ji}_k = −f^{ij}_k` from each listed `f^{ij}_k`. Listing both
    /// orders is allowed if they agree.
    pub fn with_antisymmetric_completion<I>(splitting: Vec<i64>, entries: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, LaurentPolynomial)>,
    {
        let n = splitting.len();
        let mut brackets: BTreeMap<(usize, usize, usize), LaurentPolynomial> = BTreeMap::new();
        let mut put = |key: (usize, usize, usize), f: LaurentPolynomial| -> Result<(), LieError> {
            match brackets.get(&key) {
                Some(old) if !old.approx_eq(&f, IDENTITY_TOL * (1.0 + f.max_abs())) => {
                    Err(LieError::ConflictingBracket { i: key.0, j: key.1, k: key.2 })
                }
                Some(_) => Ok(()),
                None => {
                    brackets.insert(key, f);
                    Ok(())
                }
            }
        };
        for (i, j, k, f) in entries {
            if i >= n || j >= n || k >= n {
                return Err(LieError::IndexOutOfRange { i, j, k, n });
            }
            if i == j {
                put((i, i, k), f)?;
            } else {
                put((j, i, k), -&f)?;
                put((i, j, k), f)?;
            }
        }
        brackets.retain(|_, f| !f.is_zero());
        Ok(Self { splitting, brackets })
    }

    pub fn abelian(splitting: Vec<i64>) -> Self {
        Self {
            splitting,
            brackets: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.splitting.len()
    }

    pub fn splitting(&self) -> &[i64] {
        &self.splitting
    }

    pub fn is_negative(&self) -> bool {
        self.splitting.iter().all(|&p| p < 0)
    }

    /// `f^{ij}_k`, zero when absent.
    pub fn bracket(&self, i: usize, j: usize, k: usize) -> LaurentPolynomial {
        self.brackets.get(&(i, j, k)).cloned().unwrap_or_default()
    }

    pub fn nonzero_brackets(&self) -> impl Iterator<Item = ((usize, usize, usize), &LaurentPolynomial)> {
        self.brackets.iter().map(|(&key, f)| (key, f))
    }

    /// Degree of the section `f^{ij}_k`.
    pub fn bracket_degree(&self, i: usize, j: usize, k: usize) -> i64 {
        self.splitting[i] + self.splitting[j] - self.splitting[k]
    }

    /// The same structure constant in the 1/ζ chart, where `ẽ_i = ζ^{−p_i} e_i`.
    pub fn far_chart_bracket(&self, i: usize, j: usize, k: usize) -> LaurentPolynomial {
        self.bracket(i, j, k).shift(-self.bracket_degree(i, j, k))
    }

    /// Structure tensor at a point: entry `[(i * n + j) * n + k]` is `f^{ij}_k(ζ)`.
    pub fn structure_at(&self, zeta: Complex64) -> Vec<Complex64> {
        let n = self.rank();
        let mut c = vec![Complex64::new(0.0, 0.0); n * n * n];
        for (&(i, j, k), f) in &self.brackets {
            c[(i * n + j) * n + k] = f.eval(zeta);
        }
        c
    }

    /// Restriction to the summands in `keep` (renumbered in the given order).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let brackets = self
            .brackets
            .iter()
            .filter_map(|(&(i, j, k), f)| Some(((*pos.get(&i)?, *pos.get(&j)?, *pos.get(&k)?), f.clone())))
            .collect();
        Self {
            splitting: keep.iter().map(|&i| self.splitting[i]).collect(),
            brackets,
        }
    }

    /// Relabels `e_i` as `e_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut splitting = vec![0; self.rank()];
        for (i, &p) in perm.iter().enumerate() {
            splitting[p] = self.splitting[i];
        }
        let brackets = self
            .brackets
            .iter()
            .map(|(&(i, j, k), f)| ((perm[i], perm[j], perm[k]), f.clone()))
            .collect();
        Self { splitting, brackets }
    }

    fn coefficient_scale(&self) -> f64 {
        self.brackets.values().map(LaurentPolynomial::max_abs).fold(1.0, f64::max)
    }

    /// Checks antisymmetry, the degree constraints and the Jacobi identity as
    /// polynomial identities in ζ.
    pub fn validate(&self) -> ValidationReport {
        let n = self.rank();
        let scale = self.coefficient_scale();
        let tol1 = IDENTITY_TOL * scale;
        let tol2 = IDENTITY_TOL * scale * scale;
        let mut violations = Vec::new();

        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let residual = if i == j {
                        self.bracket(i, i, k)
                    } else {
                        &self.bracket(i, j, k) + &self.bracket(j, i, k)
                    };
                    if residual.max_abs() > tol1 {
                        violations.push(Violation {
                            kind: ViolationKind::Antisymmetry,
                            indices: vec![i, j, k],
                            residual,
                        });
                    }
                }
            }
        }

        for (&(i, j, k), f) in &self.brackets {
            let deg = self.bracket_degree(i, j, k);
            let outside = LaurentPolynomial::from_terms(
                f.terms().filter(|&(e, c)| (e < 0 || e > deg) && c.norm() > tol1),
            );
            if !outside.is_zero() {
                violations.push(Violation {
                    kind: ViolationKind::Degree,
                    indices: vec![i, j, k],
                    residual: outside,
                });
            }
        }

        // Σ_k f^{ij}_k f^{kl}_m + f^{jl}_k f^{ki}_m + f^{li}_k f^{kj}_m = 0
        let mut by_first: BTreeMap<(usize, usize), Vec<(usize, &LaurentPolynomial)>> = BTreeMap::new();
        for (&(i, j, k), f) in &self.brackets {
            by_first.entry((i, j)).or_default().push((k, f));
        }
        let term = |a: usize, b: usize, c: usize, m: usize| -> LaurentPolynomial {
            let mut acc = LaurentPolynomial::zero();
            if let Some(list) = by_first.get(&(a, b)) {
                for &(k, f) in list {
                    if let Some(g) = self.brackets.get(&(k, c, m)) {
                        acc = &acc + &(f * g);
                    }
                }
            }
            acc
        };
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    for m in 0..n {
                        let residual = &(&term(i, j, l, m) + &term(j, l, i, m)) + &term(l, i, j, m);
                        if residual.max_abs() > tol2 {
                            violations.push(Violation {
                                kind: ViolationKind::Jacobi,
                                indices: vec![i, j, l, m],
                                residual,
                            });
                        }
                    }
                }
            }
        }

        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// `Ok(())` when valid, otherwise the first violation as an error.
    pub fn ensure_valid(&self) -> Result<(), LieError> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(LieError::Invalid(format!(
                "{} violation at {:?} ({} in total)",
                v.kind.label(),
                v.indices,
                report.violations.len()
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Antisymmetry,
    Degree,
    Jacobi,
}

impl ViolationKind {
    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::Antisymmetry => "antisymmetry",
            ViolationKind::Degree => "degree",
            ViolationKind::Jacobi => "Jacobi",
        }
    }
}

/// One failed identity. `indices` is `(i, j, k)` for antisymmetry and degree,
/// `(i, j, l, m)` for Jacobi.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub residual: LaurentPolynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// One entry of the sparse bracket table in a JSON literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeffs: LaurentPolynomial,
}

fn default_true() -> bool {
    true
}

/// JSON literal: splitting list plus sparse bracket table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieLiteral {
    pub splitting: Vec<i64>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    /// Fill `[e_j, e_i]` from each listed `[e_i, e_j]`.
    #[serde(default = "default_true")]
    pub complete_antisymmetry: bool,
}

impl TryFrom<&LieLiteral> for TwistorLieAlgebra {
    type Error = LieError;
    fn try_from(lit: &LieLiteral) -> Result<Self, LieError> {
        let entries = lit.brackets.iter().map(|b| (b.i, b.j, b.k, b.coeffs.clone()));
        if lit.complete_antisymmetry {
            TwistorLieAlgebra::with_antisymmetric_completion(lit.splitting.clone(), entries)
        } else {
            TwistorLieAlgebra::new(lit.splitting.clone(), entries)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn constant(c: f64) -> LaurentPolynomial {
        LaurentPolynomial::constant(Complex64::new(c, 0.0))
    }

    fn heisenberg() -> TwistorLieAlgebra {
        TwistorLieAlgebra::with_antisymmetric_completion(vec![-1, -1, -2], [(0, 1, 2, constant(1.0))]).unwrap()
    }

    #[test]
    fn abelian_and_heisenberg_are_valid() {
        assert!(TwistorLieAlgebra::abelian(vec![3, -1, 0]).validate().valid);
        let h = heisenberg();
        assert!(h.validate().valid);
        assert_eq!(h.bracket(1, 0, 2), constant(-1.0));
    }

    #[test]
    fn forced_zero_bracket_is_reported() {
        let l = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![-1, -1, -1],
            [(0, 1, 2, LaurentPolynomial::zeta_pow(1))],
        )
        .unwrap();
        let report = l.validate();
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::Degree));
        assert_eq!(report.violations[0].residual, LaurentPolynomial::zeta_pow(1));
    }

    #[test]
    fn missing_antisymmetric_partner_is_reported() {
        let l = TwistorLieAlgebra::new(vec![-1, -1, -2], [(0, 1, 2, constant(1.0))]).unwrap();
        let report = l.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Antisymmetry);
        assert_eq!(report.violations[0].indices, vec![0, 1, 2]);
    }

    #[test]
    fn jacobi_failure_is_found() {
        // [e0,e1]=e1, [e0,e2]=e2, [e1,e2]=e0 on a trivial bundle fails Jacobi
        let l = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![0, 0, 0],
            [(0, 1, 1, constant(1.0)), (0, 2, 2, constant(1.0)), (1, 2, 0, constant(1.0))],
        )
        .unwrap();
        let report = l.validate();
        assert!(report.violations.iter().any(|v| v.kind == ViolationKind::Jacobi));
    }

    #[test]
    fn sl2_constants_are_valid() {
        // [h,e]=2e, [h,f]=−2f, [e,f]=h on O ⊕ O ⊕ O
        let l = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![0, 0, 0],
            [(0, 1, 1, constant(2.0)), (0, 2, 2, constant(-2.0)), (1, 2, 0, constant(1.0))],
        )
        .unwrap();
        assert!(l.validate().valid);
    }

    #[test]
    fn conflicting_orders_are_rejected() {
        let err = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![-1, -1, -2],
            [(0, 1, 2, constant(1.0)), (1, 0, 2, constant(1.0))],
        );
        assert!(matches!(err, Err(LieError::ConflictingBracket { .. })));
    }

    #[test]
    fn literal_parses() {
        let lit: LieLiteral = serde_json::from_str(
            r#"{"splitting":[-1,-1,-2],"brackets":[{"i":0,"j":1,"k":2,"coeffs":{"0":[1,0]}}]}"#,
        )
        .unwrap();
        let l = TwistorLieAlgebra::try_from(&lit).unwrap();
        assert_eq!(l, heisenberg());
    }

    #[test]
    fn far_chart_rescaling() {
        let l = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![-1, -1, -3],
            [(0, 1, 2, LaurentPolynomial::from_dense(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]))],
        )
        .unwrap();
        // degree 1: 1 + 2ζ becomes ζ^{-1} + 2
        let far = l.far_chart_bracket(0, 1, 2);
        assert_eq!(far.coeff(-1), Complex64::new(1.0, 0.0));
        assert_eq!(far.coeff(0), Complex64::new(2.0, 0.0));
    }
}
