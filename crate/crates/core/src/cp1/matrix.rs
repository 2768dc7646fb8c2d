//! Square and rectangular matrices of Laurent polynomials.

use std::collections::HashMap;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPolynomial;

/// Row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentMatrix {
    rows: Vec<Vec<LaurentPolynomial>>,
}

impl LaurentMatrix {
    /// Fails (returns `None`) on ragged input.
    pub fn from_rows(rows: Vec<Vec<LaurentPolynomial>>) -> Option<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        rows.iter().all(|r| r.len() == ncols).then_some(Self { rows })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            rows: vec![vec![LaurentPolynomial::zero(); ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = LaurentPolynomial::one();
        }
        m
    }

    /// `diag(ζ^{e_0}, ζ^{e_1}, …)`.
    pub fn diagonal_powers(exponents: &[i64]) -> Self {
        let mut m = Self::zeros(exponents.len(), exponents.len());
        for (i, &e) in exponents.iter().enumerate() {
            m.rows[i][i] = LaurentPolynomial::zeta_pow(e);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPolynomial {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPolynomial) {
        self.rows[i][j] = p;
    }

    pub fn rows(&self) -> &[Vec<LaurentPolynomial>] {
        &self.rows
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPolynomial> {
        self.rows.iter().flatten()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.entries().filter_map(LaurentPolynomial::max_exponent).max()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.entries().filter_map(LaurentPolynomial::min_exponent).min()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(LaurentPolynomial::max_abs).fold(0.0, f64::max)
    }

    pub fn map<F: Fn(&LaurentPolynomial) -> LaurentPolynomial>(&self, f: F) -> Self {
        Self {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let (n, m) = (self.nrows(), self.ncols());
        let mut t = Self::zeros(m, n);
        for i in 0..n {
            for j in 0..m {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    /// Multiplies every entry by `ζ^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        self.map(|p| p.shift(shift))
    }

    /// Drops coefficients below `rel_tol` times the largest coefficient of the
    /// whole matrix.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cutoff = rel_tol * self.max_abs();
        self.map(|p| p.trimmed_abs(cutoff))
    }

    pub fn eval(&self, zeta: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| self.rows[i][j].eval(zeta))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            rows: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Determinant by cofactor expansion with memoised column subsets.
    pub fn det(&self) -> LaurentPolynomial {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let rows: Vec<usize> = (0..self.nrows()).collect();
        minor_det(self, &rows, &rows)
    }

    /// Classical adjugate, so that `self * adj = det · I`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square(), "adjugate of a non-square matrix");
        let n = self.nrows();
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let mut cof = minor_det(self, &rows, &cols);
                if (i + j) % 2 == 1 {
                    cof = -&cof;
                }
                // adj = cofactor transpose
                adj.rows[j][i] = cof;
            }
        }
        adj
    }

    pub fn approx_eq(&self, other: &Self, abs_tol: f64) -> bool {
        self.nrows() == other.nrows()
            && self.ncols() == other.ncols()
            && self
                .entries()
                .zip(other.entries())
                .all(|(a, b)| a.approx_eq(b, abs_tol))
    }
}

fn minor_det(m: &LaurentMatrix, rows: &[usize], cols: &[usize]) -> LaurentPolynomial {
    assert_eq!(rows.len(), cols.len());
    assert!(cols.len() < 64);
    let mut memo: HashMap<u64, LaurentPolynomial> = HashMap::new();
    let full = if cols.is_empty() { 0 } else { u64::MAX >> (64 - cols.len()) };
    expand(m, rows, cols, full, &mut memo)
}

// Expands along row `rows[len - popcount(mask)]` over the columns left in `mask`.
fn expand(
    m: &LaurentMatrix,
    rows: &[usize],
    cols: &[usize],
    mask: u64,
    memo: &mut HashMap<u64, LaurentPolynomial>,
) -> LaurentPolynomial {
    if mask == 0 {
        return LaurentPolynomial::one();
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let row = rows[rows.len() - mask.count_ones() as usize];
    let mut acc = LaurentPolynomial::zero();
    let mut sign_pos = true;
    for (idx, &col) in cols.iter().enumerate() {
        if mask & (1 << idx) == 0 {
            continue;
        }
        let entry = &m.rows[row][col];
        if !entry.is_zero() {
            let sub = expand(m, rows, cols, mask & !(1 << idx), memo);
            let term = entry * &sub;
            acc = if sign_pos { &acc + &term } else { &acc - &term };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(mask, acc.clone());
    acc
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.ncols(), rhs.nrows(), "dimension mismatch");
        let mut out = LaurentMatrix::zeros(self.nrows(), rhs.ncols());
        for i in 0..self.nrows() {
            for j in 0..rhs.ncols() {
                let mut acc = LaurentPolynomial::zero();
                for k in 0..self.ncols() {
                    if self.rows[i][k].is_zero() || rhs.rows[k][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self.rows[i][k] * &rhs.rows[k][j]);
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }
}

impl Mul for LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: LaurentMatrix) -> LaurentMatrix {
        &self * &rhs
    }
}
