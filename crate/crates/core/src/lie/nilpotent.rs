//! Lower central series on fibers and the maximal negative subalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{LieError, TwistorLieAlgebra};
use crate::linalg::{column_space, RANK_TOL};

/// Generic fiber points at which polynomial module ranks are sampled.
pub const SAMPLE_POINTS: [(f64, f64); 5] = [
    (0.3719, 0.6121),
    (-0.8433, 0.2907),
    (1.4172, -0.5536),
    (-0.1289, -1.2214),
    (0.6667, 0.0413),
];

/// The Lie algebra of one fiber, as a dense structure tensor.
#[derive(Clone, Debug)]
pub struct FiberAlgebra {
    n: usize,
    c: Vec<Complex64>,
}

impl FiberAlgebra {
    pub fn at(l: &TwistorLieAlgebra, zeta: Complex64) -> Self {
        Self {
            n: l.rank(),
            c: l.structure_at(zeta),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn bracket(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            if x[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += xy * self.c[base + k];
                }
            }
        }
        out
    }

    /// Dimensions of `g ⊃ [g,g] ⊃ [g,[g,g]] ⊃ …`, stopping at zero or when the
    /// series stalls. The last entry is 0 exactly when the fiber is nilpotent.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.n;
        let mut dims = vec![n];
        let mut basis = DMatrix::<Complex64>::identity(n, n);
        while basis.ncols() > 0 {
            let mut cols: Vec<Complex64> = Vec::with_capacity(n * n * basis.ncols());
            let mut count = 0;
            for i in 0..n {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[i] = Complex64::new(1.0, 0.0);
                for b in basis.column_iter() {
                    let y: Vec<Complex64> = b.iter().copied().collect();
                    cols.extend(self.bracket(&e, &y));
                    count += 1;
                }
            }
            let image = DMatrix::from_column_slice(n, count, &cols);
            let next = column_space(&image, RANK_TOL);
            let d = next.ncols();
            let stalled = d == basis.ncols();
            dims.push(d);
            if stalled {
                break;
            }
            basis = next;
        }
        dims
    }

    /// Nilpotency class, `None` when the lower central series stalls.
    pub fn class(&self) -> Option<usize> {
        let dims = self.lower_central_series();
        (dims.last() == Some(&0)).then(|| dims.iter().filter(|&&d| d > 0).count())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NilpotencyReport {
    /// All summands have negative degree.
    pub is_negative: bool,
    /// Length of the lower central series; `None` when it does not terminate.
    pub class: Option<usize>,
    /// Largest dimension of each term of the series over the sample points.
    pub series_dims: Vec<usize>,
}

/// Lower central series of a valid twistor Lie algebra, with ranks decided
/// at [`SAMPLE_POINTS`].
pub fn nilpotency(l: &TwistorLieAlgebra) -> Result<NilpotencyReport, LieError> {
    l.ensure_valid()?;
    let mut series_dims: Vec<usize> = Vec::new();
    let mut nilpotent = true;
    for &(re, im) in &SAMPLE_POINTS {
        let dims = FiberAlgebra::at(l, Complex64::new(re, im)).lower_central_series();
        nilpotent &= dims.last() == Some(&0);
        if dims.len() > series_dims.len() {
            series_dims.resize(dims.len(), 0);
        }
        for (acc, d) in series_dims.iter_mut().zip(&dims) {
            *acc = (*acc).max(*d);
        }
    }
    let class = nilpotent.then(|| series_dims.iter().filter(|&&d| d > 0).count());
    Ok(NilpotencyReport {
        is_negative: l.is_negative(),
        class,
        series_dims,
    })
}

/// Restriction to the negative summands, with the indices it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativePart {
    pub algebra: TwistorLieAlgebra,
    pub embedding: Vec<usize>,
}

/// The summands of negative degree and the brackets among them.
///
/// Closure is checked on the bracket table itself: any nonzero `f^{ij}_k`
/// with `p_i, p_j < 0 ≤ p_k` is reported. For valid input such a bracket has
/// negative degree and is therefore zero.
pub fn maximal_negative_subalgebra(l: &TwistorLieAlgebra) -> Result<NegativePart, LieError> {
    let p = l.splitting();
    for ((i, j, k), _) in l.nonzero_brackets() {
        if p[i] < 0 && p[j] < 0 && p[k] >= 0 {
            return Err(LieError::NotSubalgebra { i, j, k });
        }
    }
    let embedding: Vec<usize> = (0..l.rank()).filter(|&i| p[i] < 0).collect();
    Ok(NegativePart {
        algebra: l.restrict(&embedding),
        embedding,
    })
}
