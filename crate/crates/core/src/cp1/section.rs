//! Sections of the line bundles O(k) and the antipodal real structure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPolynomial;
use super::BundleError;

/// A holomorphic section `s(ζ) = Σ c_i ζ^i` of O(k), written in the ζ ≠ ∞ chart.
///
/// For `k < 0` the only section is zero and `coeffs` is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineBundleSection {
    pub degree: i64,
    #[serde(with = "complex_vec")]
    pub coeffs: Vec<Complex64>,
}

impl LineBundleSection {
    pub fn new(degree: i64, coeffs: Vec<Complex64>) -> Result<Self, BundleError> {
        let expected = if degree >= 0 { degree as usize + 1 } else { 0 };
        if coeffs.len() != expected {
            return Err(BundleError::SectionLength {
                degree,
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { degree, coeffs })
    }

    pub fn zero(degree: i64) -> Self {
        let n = if degree >= 0 { degree as usize + 1 } else { 0 };
        Self {
            degree,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(degree: i64, coeffs: &[f64]) -> Result<Self, BundleError> {
        Self::new(degree, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Reads a polynomial as a section of O(degree); fails if an exponent falls
    /// outside `0..=degree`.
    pub fn from_polynomial(degree: i64, p: &LaurentPolynomial) -> Result<Self, BundleError> {
        let mut s = Self::zero(degree);
        for (e, c) in p.terms() {
            if e < 0 || e > degree {
                return Err(BundleError::SectionExponent { degree, exponent: e });
            }
            s.coeffs[e as usize] = c;
        }
        Ok(s)
    }

    pub fn to_polynomial(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_dense(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * zeta + c)
    }

    /// Image under the real structure covering ζ ↦ −1/ζ̄.
    ///
    /// On O(2m) the coefficients map as `c'_{2m−i} = (−1)^{m+i} conj(c_i)`;
    /// odd degrees carry no compatible real structure.
    pub fn real_conjugate(&self) -> Result<Self, BundleError> {
        if self.degree % 2 != 0 {
            return Err(BundleError::OddDegreeReality(self.degree));
        }
        if self.degree < 0 {
            return Ok(self.clone());
        }
        let k = self.degree as usize;
        let m = k / 2;
        let mut out = vec![Complex64::new(0.0, 0.0); k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[k - i] = reality_sign(m, i) * c.conj();
        }
        Ok(Self {
            degree: self.degree,
            coeffs: out,
        })
    }

    /// Largest coefficient deviation from the real-structure condition.
    pub fn reality_defect(&self) -> Result<f64, BundleError> {
        let conj = self.real_conjugate()?;
        Ok(self
            .coeffs
            .iter()
            .zip(&conj.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect().map(|d| d <= tol).unwrap_or(false)
    }

    /// Real section of O(2m) from its free real parameters.
    ///
    /// Parameters are `(Re c_i, Im c_i)` for `i < m` followed by the real
    /// middle coefficient `c_m`, giving `2m + 1` reals.
    pub fn real_from_params(degree: i64, params: &[f64]) -> Result<Self, BundleError> {
        if degree < 0 || degree % 2 != 0 {
            return Err(BundleError::OddDegreeReality(degree));
        }
        let k = degree as usize;
        let m = k / 2;
        if params.len() != k + 1 {
            return Err(BundleError::SectionLength {
                degree,
                expected: k + 1,
                found: params.len(),
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        for i in 0..m {
            let c = Complex64::new(params[2 * i], params[2 * i + 1]);
            coeffs[i] = c;
            coeffs[k - i] = reality_sign(m, i) * c.conj();
        }
        coeffs[m] = Complex64::new(params[2 * m], 0.0);
        Ok(Self { degree, coeffs })
    }
}

/// The sign `(−1)^{m+i}` in the reality condition on O(2m).
pub fn reality_sign(m: usize, i: usize) -> f64 {
    if (m + i).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Real structure of a line bundle's cohomology, when one exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealCohomology {
    /// Real dimensions of the τ-invariant parts of H⁰ and H¹.
    Dims { h0: usize, h1: usize },
    /// Odd degree: O(k) is not a twistor group.
    NoRealStructure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCohomology {
    pub degree: i64,
    pub h0: usize,
    pub h1: usize,
    pub real: Option<RealCohomology>,
}

impl LineCohomology {
    /// Real dimension of the invariant part of H⁰, when defined.
    pub fn real_h0(&self) -> Option<usize> {
        match self.real {
            Some(RealCohomology::Dims { h0, .. }) => Some(h0),
            _ => None,
        }
    }

    pub fn real_h1(&self) -> Option<usize> {
        match self.real {
            Some(RealCohomology::Dims { h1, .. }) => Some(h1),
            _ => None,
        }
    }
}

/// Cohomology dimensions of O(k): `h⁰ = max(0, k+1)`, `h¹ = max(0, −k−1)`.
///
/// With `real` set, the real dimensions of the τ-invariant subspaces are
/// reported for even `k`, and odd `k` is flagged.
pub fn line_bundle_cohomology(k: i64, real: bool) -> LineCohomology {
    let h0 = (k + 1).max(0) as usize;
    let h1 = (-k - 1).max(0) as usize;
    let real = real.then_some({
        if k % 2 == 0 {
            // τ is antilinear and involutive, so the invariant part is a real
            // form of the whole space.
            RealCohomology::Dims { h0, h1 }
        } else {
            RealCohomology::NoRealStructure
        }
    });
    LineCohomology { degree: k, h0, h1, real }
}

pub(crate) mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cohomology_examples() {
        let c = line_bundle_cohomology(2, true);
        assert_eq!((c.h0, c.h1), (3, 0));
        assert_eq!(c.real_h0(), Some(3));

        let c = line_bundle_cohomology(-2, true);
        assert_eq!((c.h0, c.h1), (0, 1));
        assert_eq!(c.real_h1(), Some(1));

        let c = line_bundle_cohomology(3, true);
        assert_eq!(c.real, Some(RealCohomology::NoRealStructure));
        assert_eq!(line_bundle_cohomology(3, false).real, None);
        assert_eq!(line_bundle_cohomology(-1, false).h1, 0);
    }

    #[test]
    fn real_o2_section_has_real_middle_and_antipodal_ends() {
        let s = LineBundleSection::real_from_params(2, &[0.3, -0.7, 1.25]).unwrap();
        assert_eq!(s.coeffs[1], Complex64::new(1.25, 0.0));
        assert_eq!(s.coeffs[2], -s.coeffs[0].conj());
        assert!(s.is_real(0.0));
    }

    #[test]
    fn odd_degree_has_no_real_structure() {
        let s = LineBundleSection::zero(3);
        assert!(matches!(s.real_conjugate(), Err(BundleError::OddDegreeReality(3))));
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(LineBundleSection::from_real(2, &[1.0, 2.0]).is_err());
        assert!(LineBundleSection::new(-3, vec![]).is_ok());
    }

    #[test]
    fn real_sections_vanish_only_in_antipodal_pairs() {
        // A real section of O(2) with a zero at ζ₀ also vanishes at −1/ζ̄₀.
        let z0 = Complex64::new(0.4, 1.3);
        let anti = -z0.conj().inv();
        // (ζ − ζ₀)(ζ − anti) rescaled to be real: c·(ζ−ζ₀)(ζ+1/ζ̄₀)
        let c = z0.conj();
        let p = [c * (-z0) * (-anti), c * (-z0 - anti), c];
        let s = LineBundleSection::new(2, p.to_vec()).unwrap();
        assert!(s.reality_defect().unwrap() < 1e-12);
        assert!(s.eval(z0).norm() < 1e-12);
        assert!(s.eval(anti).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn reality_involution_squares_to_identity(
            m in 0usize..5,
            raw in proptest::collection::vec(-5.0f64..5.0, 22),
        ) {
            let k = 2 * m;
            let coeffs: Vec<Complex64> = (0..=k).map(|i| Complex64::new(raw[2*i], raw[2*i+1])).collect();
            let s = LineBundleSection::new(k as i64, coeffs).unwrap();
            let twice = s.real_conjugate().unwrap().real_conjugate().unwrap();
            prop_assert_eq!(twice, s);
        }

        #[test]
        fn real_sections_form_a_space_of_dimension_k_plus_one(m in 0usize..6) {
            // The averaging map s ↦ (s + τs)/2 projects onto the real sections;
            // its real rank over the basis {ζ^i, iζ^i} is the real dimension.
            let k = 2 * m;
            let mut images: Vec<Vec<f64>> = Vec::new();
            for i in 0..=k {
                for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                    let mut s = LineBundleSection::zero(k as i64);
                    s.coeffs[i] = unit;
                    let t = s.real_conjugate().unwrap();
                    let avg: Vec<f64> = s.coeffs.iter().zip(&t.coeffs)
                        .flat_map(|(a, b)| { let v = (a + b) * 0.5; [v.re, v.im] })
                        .collect();
                    images.push(avg);
                }
            }
            let mat = nalgebra::DMatrix::from_fn(images.len(), images[0].len(), |r, c| images[r][c]);
            let rank = mat.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count();
            prop_assert_eq!(rank, k + 1);
            prop_assert_eq!(line_bundle_cohomology(k as i64, true).real_h0(), Some(k + 1));
        }
    }
}
