//! Group law on a nilpotent fiber via the Campbell–Hausdorff series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nilpotent::FiberAlgebra;
use super::{LieError, TwistorLieAlgebra};
use crate::cp1::section::complex_vec;

/// A vector `Σ v_i e_i` in the fiber over ζ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberElement {
    #[serde(with = "complex_scalar")]
    pub zeta: Complex64,
    #[serde(with = "complex_vec")]
    pub coords: Vec<Complex64>,
}

impl FiberElement {
    pub fn new(zeta: Complex64, coords: Vec<Complex64>) -> Self {
        Self { zeta, coords }
    }

    pub fn zero(zeta: Complex64, n: usize) -> Self {
        Self::new(zeta, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `x · y = log(exp x · exp y)`, with the series cut at the nilpotency class
/// of the fiber, where it terminates.
pub fn bch_multiply(l: &TwistorLieAlgebra, x: &FiberElement, y: &FiberElement) -> Result<FiberElement, LieError> {
    check_operands(l, x, y)?;
    l.ensure_valid()?;
    let fiber = FiberAlgebra::at(l, x.zeta);
    let class = fiber.class().ok_or(LieError::NotNilpotent)?;
    Ok(FiberElement::new(x.zeta, bch_series(&fiber, &x.coords, &y.coords, class)))
}

/// Group inverse. `x` and `−x` commute, so the series gives exactly `−x`.
pub fn bch_inverse(x: &FiberElement) -> FiberElement {
    FiberElement::new(x.zeta, x.coords.iter().map(|c| -c).collect())
}

fn check_operands(l: &TwistorLieAlgebra, x: &FiberElement, y: &FiberElement) -> Result<(), LieError> {
    if x.zeta != y.zeta {
        return Err(LieError::FiberMismatch(x.zeta, y.zeta));
    }
    for v in [x, y] {
        if v.coords.len() != l.rank() {
            return Err(LieError::DimensionMismatch {
                expected: l.rank(),
                found: v.coords.len(),
            });
        }
    }
    Ok(())
}

/// Homogeneous components `Z_1, …, Z_order` from the recursion
///
/// `(n+1) Z_{n+1} = ½[x−y, Z_n] + Σ_{p≥1} B_{2p}/(2p)! Σ_{k_1+…+k_{2p}=n}
///  [Z_{k_1}, [Z_{k_2}, …, [Z_{k_{2p}}, x+y]…]]`.
pub fn bch_series(fiber: &FiberAlgebra, x: &[Complex64], y: &[Complex64], order: usize) -> Vec<Complex64> {
    let n = fiber.rank();
    let sum: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    if order <= 1 {
        return sum;
    }
    let diff: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let bern = bernoulli_even_over_factorial(order);
    let mut z: Vec<Vec<Complex64>> = vec![Vec::new(), sum.clone()];
    for deg in 1..order {
        let mut next: Vec<Complex64> = fiber
            .bracket(&diff, &z[deg])
            .into_iter()
            .map(|c| c * 0.5)
            .collect();
        for p in 1..=deg / 2 {
            let coef = bern[p];
            if coef == 0.0 {
                continue;
            }
            for parts in compositions(deg, 2 * p) {
                let mut acc = sum.clone();
                for &k in parts.iter().rev() {
                    acc = fiber.bracket(&z[k], &acc);
                }
                for (o, a) in next.iter_mut().zip(&acc) {
                    *o += coef * a;
                }
            }
        }
        let scale = 1.0 / (deg as f64 + 1.0);
        z.push(next.into_iter().map(|c| c * scale).collect());
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for comp in &z[1..] {
        for (o, c) in out.iter_mut().zip(comp) {
            *o += c;
        }
    }
    out
}

/// `B_{2p} / (2p)!` for `0 ≤ 2p ≤ max`.
fn bernoulli_even_over_factorial(max: usize) -> Vec<f64> {
    let m = max.max(2);
    let mut b = vec![0.0f64; m + 1];
    b[0] = 1.0;
    for k in 1..=m {
        let mut s = 0.0;
        let mut binom = 1.0; // C(k+1, j)
        for (j, bj) in b.iter().enumerate().take(k) {
            s += binom * bj;
            binom = binom * (k + 1 - j) as f64 / (j + 1) as f64;
        }
        b[k] = -s / (k as f64 + 1.0);
    }
    let mut fact = 1.0;
    let mut out = Vec::new();
    for (k, bk) in b.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        if k % 2 == 0 {
            out.push(bk / fact);
        }
    }
    out
}

/// Ordered tuples of `parts` positive integers adding up to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if total < parts {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 1..=(total - parts + 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

mod complex_scalar {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp1::LaurentPolynomial;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn heisenberg() -> TwistorLieAlgebra {
        TwistorLieAlgebra::with_antisymmetric_completion(vec![-1, -1, -2], [(0, 1, 2, LaurentPolynomial::constant(c(1.0)))])
            .unwrap()
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_even_over_factorial(6);
        assert!((b[1] - 1.0 / 12.0).abs() < 1e-15);
        assert!((b[2] + 1.0 / 720.0).abs() < 1e-15);
        assert!((b[3] - 1.0 / 30240.0).abs() < 1e-15);
    }

    #[test]
    fn compositions_count() {
        // C(n−1, k−1)
        assert_eq!(compositions(5, 2).len(), 4);
        assert_eq!(compositions(6, 3).len(), 10);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn heisenberg_product() {
        let one = c(1.0);
        let x = FiberElement::new(one, vec![one, c(0.0), c(0.0)]);
        let y = FiberElement::new(one, vec![c(0.0), one, c(0.0)]);
        let xy = bch_multiply(&heisenberg(), &x, &y).unwrap();
        assert_eq!(xy.coords, vec![one, one, c(0.5)]);
    }

    #[test]
    fn abelian_product_is_sum() {
        let l = TwistorLieAlgebra::abelian(vec![-2, -3]);
        let z = Complex64::new(0.2, 0.9);
        let x = FiberElement::new(z, vec![c(1.5), c(-2.0)]);
        let y = FiberElement::new(z, vec![c(0.25), c(4.0)]);
        assert_eq!(bch_multiply(&l, &x, &y).unwrap().coords, vec![c(1.75), c(2.0)]);
    }

    #[test]
    fn third_order_term_matches_closed_form() {
        // free-ish class-3 algebra: [e0,e1]=e2, [e0,e2]=e3, [e1,e2]=e4
        let l = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![-1, -1, -2, -3, -3],
            [
                (0, 1, 2, LaurentPolynomial::constant(c(1.0))),
                (0, 2, 3, LaurentPolynomial::constant(c(1.0))),
                (1, 2, 4, LaurentPolynomial::constant(c(1.0))),
            ],
        )
        .unwrap();
        let z = c(1.0);
        let x = FiberElement::new(z, vec![c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let y = FiberElement::new(z, vec![c(0.0), c(1.0), c(0.0), c(0.0), c(0.0)]);
        // x + y + ½[x,y] + (1/12)([x,[x,y]] + [y,[y,x]]) = e0+e1+½e2+(1/12)(e3 − e4)
        let xy = bch_multiply(&l, &x, &y).unwrap();
        let expect = [1.0, 1.0, 0.5, 1.0 / 12.0, -1.0 / 12.0];
        for (a, b) in xy.coords.iter().zip(expect) {
            assert!((a - c(b)).norm() < 1e-15);
        }
    }

    #[test]
    fn inverse_gives_identity() {
        let z = c(1.0);
        let x = FiberElement::new(z, vec![c(0.3), c(-1.1), c(2.0)]);
        let prod = bch_multiply(&heisenberg(), &x, &bch_inverse(&x)).unwrap();
        assert!(prod.max_abs_diff(&FiberElement::zero(z, 3)) < 1e-15);
    }

    #[test]
    fn non_nilpotent_fiber_is_rejected() {
        let sl2 = TwistorLieAlgebra::with_antisymmetric_completion(
            vec![0, 0, 0],
            [
                (0, 1, 1, LaurentPolynomial::constant(c(2.0))),
                (0, 2, 2, LaurentPolynomial::constant(c(-2.0))),
                (1, 2, 0, LaurentPolynomial::constant(c(1.0))),
            ],
        )
        .unwrap();
        let x = FiberElement::zero(c(0.0), 3);
        assert_eq!(bch_multiply(&sl2, &x, &x).unwrap_err(), LieError::NotNilpotent);
    }

    #[test]
    fn mismatched_fibers_are_rejected() {
        let x = FiberElement::zero(c(0.0), 3);
        let y = FiberElement::zero(c(1.0), 3);
        assert!(matches!(bch_multiply(&heisenberg(), &x, &y), Err(LieError::FiberMismatch(..))));
    }
}
