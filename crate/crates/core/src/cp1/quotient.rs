//! Quotient of a trivial bundle by a line subbundle O(−r) ↪ O^n.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::laurent::LaurentPolynomial;
use super::matrix::LaurentMatrix;
use super::section::LineBundleSection;
use super::{BundleError, BundleOnP1};
use crate::linalg::{inverse_condition, rank, RANK_TOL};

const OUTPUT_TRIM: f64 = 1e-12;
/// Reciprocal condition below which a mixing of the sections is rejected.
const MIXING_COND: f64 = 1e-6;

/// Quotient of `O^n` by the image of `O(−r) → O^n`, `e ↦ (q_1, …, q_n)·e`.
///
/// Each `q_i` is a section of O(r) with `r ≥ 1`. The inclusion is completed
/// to unimodular frames on both charts; the quotient transition is the block
/// of the frame change complementary to the subbundle.
pub fn quotient_bundle(q: &[LineBundleSection]) -> Result<BundleOnP1, BundleError> {
    let n = q.len();
    let r = q.first().map(|s| s.degree).ok_or(BundleError::NotInjective)?;
    if q.iter().any(|s| s.degree != r) {
        return Err(BundleError::InvalidEmbedding(
            "all sections must have the same degree".into(),
        ));
    }
    if r < 1 {
        return Err(BundleError::InvalidEmbedding(format!(
            "sections must have positive degree, got O({r})"
        )));
    }
    if q.iter().all(LineBundleSection::is_zero) {
        return Err(BundleError::NotInjective);
    }
    if n < 2 || !no_common_zero(q) {
        return Err(BundleError::EmbeddingDegenerates);
    }
    let ru = r as usize;
    let polys: Vec<Vec<Complex64>> = q.iter().map(|s| s.coeffs.clone()).collect();
    let (mixed, u) = choose_mixing(&polys, ru).ok_or(BundleError::EmbeddingDegenerates)?;

    // In the 1/ζ chart the embedding is q̃ = ζ^{−r} q, whose coefficients in
    // t = 1/ζ are those of q reversed. The Bezout pair is solved again there.
    let q_near: Vec<LaurentPolynomial> = mixed.iter().map(|c| LaurentPolynomial::from_dense(c)).collect();
    let q_far: Vec<LaurentPolynomial> = q_near.iter().map(|p| p.shift(-r)).collect();
    let u_near: Vec<LaurentPolynomial> = u.iter().map(|c| LaurentPolynomial::from_dense(c)).collect();
    let reversed: Vec<Vec<Complex64>> = mixed
        .iter()
        .map(|c| c.iter().rev().copied().collect())
        .collect();
    let u_far_dense = bezout(&reversed[0], &reversed[1], ru).ok_or(BundleError::EmbeddingDegenerates)?;
    // dense coefficients are in the variable 1/ζ
    let u_far: Vec<LaurentPolynomial> = u_far_dense
        .iter()
        .map(|c| LaurentPolynomial::from_dense(c).invert_variable())
        .collect();

    let frame = unimodular_frame(&q_near, &u_near);
    let far_inverse = unimodular_frame_inverse(&q_far, &u_far);
    let change = (&far_inverse * &frame).trimmed(OUTPUT_TRIM);
    let idx: Vec<usize> = (1..n).collect();
    BundleOnP1::new(change.submatrix(&idx, &idx).trimmed(OUTPUT_TRIM))
}

/// The degree-`(2r−1)` part of the ideal generated by binary forms of degree
/// `r` is everything iff the forms have no common zero on the projective line.
fn no_common_zero(q: &[LineBundleSection]) -> bool {
    let r = q[0].degree as usize;
    let n = q.len();
    let mut m = DMatrix::<Complex64>::zeros(2 * r, n * r);
    for (i, s) in q.iter().enumerate() {
        for shift in 0..r {
            for (e, c) in s.coeffs.iter().enumerate() {
                m[(e + shift, i * r + shift)] += *c;
            }
        }
    }
    rank(&m, RANK_TOL) == 2 * r
}

/// Solves `u1 a + u2 b = 1` with `deg u_i ≤ r−1`, for dense polynomials `a, b`
/// of degree at most `r`. Returns `None` when the Sylvester system is singular.
fn bezout(a: &[Complex64], b: &[Complex64], r: usize) -> Option<[Vec<Complex64>; 2]> {
    let sylvester = sylvester(a, b, r);
    if inverse_condition(&sylvester) < MIXING_COND * 1e-3 {
        return None;
    }
    let mut rhs = DMatrix::<Complex64>::zeros(2 * r, 1);
    rhs[(0, 0)] = Complex64::new(1.0, 0.0);
    let sol = sylvester.lu().solve(&rhs)?;
    let u1 = (0..r).map(|i| sol[(i, 0)]).collect();
    let u2 = (0..r).map(|i| sol[(r + i, 0)]).collect();
    Some([u1, u2])
}

fn sylvester(a: &[Complex64], b: &[Complex64], r: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(2 * r, 2 * r);
    for shift in 0..r {
        for (e, c) in a.iter().enumerate() {
            m[(e + shift, shift)] += *c;
        }
        for (e, c) in b.iter().enumerate() {
            m[(e + shift, r + shift)] += *c;
        }
    }
    m
}

/// Replaces `q` by `C q` for a fixed invertible `C` chosen so that the first
/// two components are coprime as binary forms. Deterministic.
#[allow(clippy::type_complexity)]
fn choose_mixing(q: &[Vec<Complex64>], r: usize) -> Option<(Vec<Vec<Complex64>>, [Vec<Complex64>; 2])> {
    let n = q.len();
    let mut best: Option<(f64, Vec<Vec<Complex64>>)> = None;
    for attempt in 0..16u64 {
        let c = mixing_matrix(n, attempt);
        if inverse_condition(&c) < 1e-3 {
            continue;
        }
        let mixed: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..=r)
                    .map(|e| (0..n).map(|j| c[(i, j)] * q[j][e]).sum())
                    .collect()
            })
            .collect();
        let cond = inverse_condition(&sylvester(&mixed[0], &mixed[1], r));
        if cond > MIXING_COND {
            best = Some((cond, mixed));
            break;
        }
        if best.as_ref().is_none_or(|(b, _)| cond > *b) {
            best = Some((cond, mixed));
        }
    }
    let (_, mixed) = best?;
    let u = bezout(&mixed[0], &mixed[1], r)?;
    Some((mixed, u))
}

fn mixing_matrix(n: usize, attempt: u64) -> DMatrix<Complex64> {
    if attempt == 0 {
        return DMatrix::identity(n, n);
    }
    // Weyl-sequence entries in [−1, 1] with an identity shift to keep C well
    // conditioned.
    let golden = 0.618_033_988_749_894_9_f64;
    DMatrix::from_fn(n, n, |i, j| {
        let k = (attempt * 131 + (i * n + j) as u64 * 17 + 1) as f64;
        let re = 2.0 * (k * golden).fract() - 1.0;
        let im = 2.0 * (k * golden * golden).fract() - 1.0;
        let diag = if i == j { 1.0 } else { 0.0 };
        Complex64::new(re + diag, 0.5 * im)
    })
}

/// `[[q1, −u2, 0], [q2, u1, 0], [q_rest, 0, I]]`, determinant `u1 q1 + u2 q2`.
fn unimodular_frame(q: &[LaurentPolynomial], u: &[LaurentPolynomial]) -> LaurentMatrix {
    let n = q.len();
    let mut a = LaurentMatrix::identity(n);
    for (i, qi) in q.iter().enumerate() {
        a.set(i, 0, qi.clone());
    }
    a.set(0, 1, -&u[1]);
    a.set(1, 1, u[0].clone());
    a
}

/// Inverse of [`unimodular_frame`] when `u1 q1 + u2 q2 = 1`.
fn unimodular_frame_inverse(q: &[LaurentPolynomial], u: &[LaurentPolynomial]) -> LaurentMatrix {
    let n = q.len();
    let mut inv = LaurentMatrix::identity(n);
    // inverse of the 2×2 block [[q1, −u2], [q2, u1]]
    let b = [[u[0].clone(), u[1].clone()], [-&q[1], q[0].clone()]];
    for i in 0..2 {
        for j in 0..2 {
            inv.set(i, j, b[i][j].clone());
        }
    }
    // lower-left block: −q_rest · (first row of the 2×2 inverse)
    for (i, qi) in q.iter().enumerate().skip(2) {
        for j in 0..2 {
            inv.set(i, j, -&(qi * &b[0][j]));
        }
    }
    inv
}
