//! Laurent polynomials in the affine coordinate ζ of the projective line.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finite sum `Σ c_e ζ^e` with complex coefficients.
///
/// Stored coefficients are always nonzero, so two polynomials are equal as
/// values iff their maps are equal.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 0)
    }

    pub fn monomial(c: Complex64, exponent: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, c);
        p
    }

    /// `ζ^e` with unit coefficient.
    pub fn zeta_pow(exponent: i64) -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), exponent)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Polynomial `Σ c_i ζ^i` from a dense coefficient slice.
    pub fn from_dense(coeffs: &[Complex64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (i as i64, c)))
    }

    pub fn add_term(&mut self, exponent: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.coeffs.entry(exponent).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> Complex64 {
        self.coeffs.get(&exponent).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&e, &c)| c * zeta.powi(e as i32))
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * s)))
    }

    /// Multiplies by `ζ^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + shift, c)).collect(),
        }
    }

    /// Substitutes ζ ↦ 1/ζ.
    pub fn invert_variable(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Drops coefficients with modulus `<= rel_tol * max_abs()`.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cutoff = rel_tol * self.max_abs();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > cutoff)
                .map(|(&e, &c)| (e, c))
                .collect(),
        }
    }

    /// Drops coefficients with modulus `<= abs_tol`.
    pub fn trimmed_abs(&self, abs_tol: f64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > abs_tol)
                .map(|(&e, &c)| (e, c))
                .collect(),
        }
    }

    /// `Some((c, d))` when the polynomial is `c ζ^d` after trimming at `rel_tol`.
    pub fn as_monomial(&self, rel_tol: f64) -> Option<(Complex64, i64)> {
        let t = self.trimmed(rel_tol);
        if t.num_terms() == 1 {
            t.terms().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    /// Part with exponents strictly greater than zero.
    pub fn positive_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.range(1..).map(|(&e, &c)| (e, c)).collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self, abs_tol: f64) -> bool {
        (self - other).max_abs() <= abs_tol
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match e {
                0 => {}
                1 => write!(f, "·ζ")?,
                _ => write!(f, "·ζ^{e}")?,
            }
        }
        Ok(())
    }
}

// JSON literal: {"exponent": [re, im], ...}
impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, [f64; 2]> = self
            .terms()
            .map(|(e, c)| (e.to_string(), [c.re, c.im]))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, [f64; 2]>::deserialize(deserializer)?;
        let mut p = LaurentPolynomial::zero();
        for (k, [re, im]) in map {
            let e: i64 = k
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("invalid exponent key {k:?}")))?;
            p.add_term(e, Complex64::new(re, im));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let p = LaurentPolynomial::from_terms([(1, c(2.0)), (-1, c(1.0))]);
        let q = LaurentPolynomial::from_terms([(1, c(-2.0))]);
        let s = &p + &q;
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(-1), c(1.0));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn product_of_laurent_terms() {
        // (ζ + ζ^-1)^2 = ζ^2 + 2 + ζ^-2
        let p = LaurentPolynomial::from_terms([(1, c(1.0)), (-1, c(1.0))]);
        let sq = &p * &p;
        assert_eq!(sq.coeff(2), c(1.0));
        assert_eq!(sq.coeff(0), c(2.0));
        assert_eq!(sq.coeff(-2), c(1.0));
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn monomial_detection_respects_tolerance() {
        let p = LaurentPolynomial::from_terms([(3, c(2.0)), (0, c(1e-14))]);
        assert_eq!(p.as_monomial(1e-9), Some((c(2.0), 3)));
        assert_eq!(p.as_monomial(0.0), None);
    }

    #[test]
    fn json_literal_roundtrip() {
        let p: LaurentPolynomial = serde_json::from_str(r#"{"-1": [1.0, 0.0], "2": [0.0, -3.5]}"#).unwrap();
        assert_eq!(p.coeff(-1), c(1.0));
        assert_eq!(p.coeff(2), Complex64::new(0.0, -3.5));
        let back: LaurentPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LaurentPolynomial>(r#"{"x": [1, 0]}"#).is_err());
    }

    #[test]
    fn eval_and_inversion() {
        let p = LaurentPolynomial::from_terms([(2, c(1.0)), (-1, c(3.0))]);
        let z = Complex64::new(0.5, 0.25);
        let q = p.invert_variable();
        assert!((q.eval(z) - p.eval(z.inv())).norm() < 1e-12);
    }
}
