//! The family of nilradicals `n_x` cut out by the negative eigenspaces of
//! `ad(a ρ(σ1) + b ρ(σ2) + c ρ(σ3))` as `x = (a, b, c)` runs over the sphere,
//! for the principal embedding `ρ` of sl(2).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LieError;
use crate::cp1::{BundleOnP1, LaurentMatrix, LaurentPolynomial, SplittingType};
use crate::linalg::lstsq;

const UNIT_TOL: f64 = 1e-9;
const EIGEN_GAP_TOL: f64 = 1e-9;
/// Roots of unity used to sample the transition before extracting its
/// Laurent coefficients.
const TRANSITION_SAMPLES: usize = 64;
const TRANSITION_TRIM: f64 = 1e-10;
const TRANSITION_CHECK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimpleAlgebra {
    Sl2,
    Sl3,
}

impl SimpleAlgebra {
    /// Dimension of the defining representation.
    pub fn size(self) -> usize {
        match self {
            SimpleAlgebra::Sl2 => 2,
            SimpleAlgebra::Sl3 => 3,
        }
    }
}

impl std::str::FromStr for SimpleAlgebra {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sl2" => Ok(SimpleAlgebra::Sl2),
            "sl3" => Ok(SimpleAlgebra::Sl3),
            other => Err(format!("unknown algebra {other:?}, expected sl2 or sl3")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct UnipotentFamily {
    pub algebra: SimpleAlgebra,
    pub direction: [f64; 3],
    /// Stereographic coordinate `(a − ib)/(1 + c)`; `None` at the south pole.
    pub zeta: Option<Complex64>,
    pub fiber_dim: usize,
    /// Eigenvectors of `ad H` with negative eigenvalue, as matrices.
    pub fiber_basis: Vec<DMatrix<Complex64>>,
    /// Number of sphere samples over which the fiber dimension was constant.
    pub samples_checked: usize,
    pub transition: LaurentMatrix,
    pub splitting: SplittingType,
}

/// Spin matrices `(J1, J2, J3)` of the irreducible representation of
/// dimension `n`, in the basis of descending `J3` weight.
pub fn spin_matrices(n: usize) -> [DMatrix<Complex64>; 3] {
    let (jp, jm) = ladder(n);
    let j1 = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let j = (n as f64 - 1.0) / 2.0;
    let j3 = DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            Complex64::new(j - a as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    [j1, j2, j3]
}

/// Raising and lowering operators `J±`.
fn ladder(n: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let j = (n as f64 - 1.0) / 2.0;
    let jp = DMatrix::from_fn(n, n, |a, b| {
        if b == a + 1 {
            let m = j - b as f64;
            Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let jm = jp.transpose();
    (jp, jm)
}

/// `H = a ρ(σ1) + b ρ(σ2) + c ρ(σ3)` with `ρ(σ_i) = 2 J_i`.
pub fn hamiltonian(n: usize, x: [f64; 3]) -> DMatrix<Complex64> {
    let [j1, j2, j3] = spin_matrices(n);
    (j1 * Complex64::new(2.0 * x[0], 0.0)) + (j2 * Complex64::new(2.0 * x[1], 0.0)) + (j3 * Complex64::new(2.0 * x[2], 0.0))
}

/// Eigenvectors `v_a v_b^†` of `ad H` with eigenvalue `h_a − h_b < 0`.
pub fn negative_eigenspace(n: usize, x: [f64; 3]) -> Vec<DMatrix<Complex64>> {
    let eig = hamiltonian(n, x).symmetric_eigen();
    let h = eig.eigenvalues;
    let v = eig.eigenvectors;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if h[a] < h[b] - EIGEN_GAP_TOL {
                out.push(v.column(a) * v.column(b).adjoint());
            }
        }
    }
    out
}

/// Stereographic coordinate of a unit vector from the north pole's antipode.
pub fn stereographic(x: [f64; 3]) -> Option<Complex64> {
    let denom = 1.0 + x[2];
    (denom.abs() > 1e-12).then(|| Complex64::new(x[0], -x[1]) / denom)
}

fn exp_nilpotent(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut out = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..n {
        term = (&term * m) / Complex64::new(k as f64, 0.0);
        out += &term;
    }
    out
}

fn unit(n: usize, a: usize, b: usize) -> DMatrix<Complex64> {
    let mut e = DMatrix::zeros(n, n);
    e[(a, b)] = Complex64::new(1.0, 0.0);
    e
}

/// Holomorphic frame of the family over ζ ≠ ∞: `Ad(exp(−ζ J+)) E_ab`, `a > b`.
pub fn near_frame(n: usize, zeta: Complex64) -> DMatrix<Complex64> {
    let (jp, _) = ladder(n);
    frame(n, &jp, zeta, |a, b| a > b)
}

/// Holomorphic frame over ζ ≠ 0 in `t = 1/ζ`: `Ad(exp(−t J−)) E_ab`, `a < b`.
pub fn far_frame(n: usize, t: Complex64) -> DMatrix<Complex64> {
    let (_, jm) = ladder(n);
    frame(n, &jm, t, |a, b| a < b)
}

fn frame(n: usize, gen: &DMatrix<Complex64>, s: Complex64, keep: impl Fn(usize, usize) -> bool) -> DMatrix<Complex64> {
    let g = exp_nilpotent(&(gen * (-s)));
    let ginv = exp_nilpotent(&(gen * s));
    let mut cols: Vec<Complex64> = Vec::new();
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            if keep(a, b) {
                let m = &g * unit(n, a, b) * &ginv;
                cols.extend(m.iter().copied());
                count += 1;
            }
        }
    }
    DMatrix::from_column_slice(n * n, count, &cols)
}

/// Transition `T` with `near(ζ) = far(1/ζ)·T(ζ)`, sampled on the unit circle
/// and expanded in Laurent coefficients.
pub fn family_transition(n: usize) -> Result<LaurentMatrix, LieError> {
    let m = TRANSITION_SAMPLES;
    let d = n * (n - 1) / 2;
    let mut samples: Vec<(Complex64, DMatrix<Complex64>)> = Vec::with_capacity(m);
    for j in 0..m {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        let t = lstsq(&far_frame(n, z.inv()), &near_frame(n, z))
            .ok_or_else(|| LieError::Transition("far frame is rank deficient".into()))?;
        samples.push((z, t));
    }
    let half = (m / 2) as i64;
    let mut rows = vec![vec![LaurentPolynomial::zero(); d]; d];
    for (r, row) in rows.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let terms = (-half..half).map(|e| {
                let coeff: Complex64 = samples
                    .iter()
                    .map(|(z, t)| t[(r, c)] * z.powi(-e as i32))
                    .sum::<Complex64>()
                    / m as f64;
                (e, coeff)
            });
            *entry = LaurentPolynomial::from_terms(terms);
        }
    }
    let t = LaurentMatrix::from_rows(rows)
        .expect("square by construction")
        .trimmed(TRANSITION_TRIM);

    let z = Complex64::from_polar(1.7, 0.3);
    let lhs = far_frame(n, z.inv()) * t.eval(z);
    let rhs = near_frame(n, z);
    let err = (&lhs - &rhs).norm() / rhs.norm().max(1.0);
    if err > TRANSITION_CHECK_TOL {
        return Err(LieError::Transition(format!(
            "Laurent expansion misses the frame change off the unit circle by {err:.3e}"
        )));
    }
    Ok(t)
}

/// Points spread over the sphere used for the constant-dimension check.
pub fn sphere_samples() -> Vec<[f64; 3]> {
    let mut out = vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
    for i in 1..6 {
        let theta = PI * i as f64 / 6.0;
        for k in 0..8 {
            let phi = 2.0 * PI * k as f64 / 8.0 + 0.1 * i as f64;
            out.push([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
        }
    }
    out
}

/// Fiber of the unipotent family at `direction` together with the splitting
/// type of the whole family.
pub fn unipotent_family(algebra: SimpleAlgebra, direction: [f64; 3]) -> Result<UnipotentFamily, LieError> {
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(LieError::NotUnitDirection(norm));
    }
    let n = algebra.size();
    let fiber_basis = negative_eigenspace(n, direction);
    let fiber_dim = fiber_basis.len();
    let samples = sphere_samples();
    for x in &samples {
        let found = negative_eigenspace(n, *x).len();
        if found != fiber_dim {
            return Err(LieError::NonConstantStratification {
                expected: fiber_dim,
                found,
            });
        }
    }
    let transition = family_transition(n)?;
    let splitting = BundleOnP1::new(transition.clone())?.splitting_type()?;
    Ok(UnipotentFamily {
        algebra,
        direction,
        zeta: stereographic(direction),
        fiber_dim,
        fiber_basis,
        samples_checked: samples.len(),
        transition,
        splitting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{column_space, subspace_distance, RANK_TOL};

    fn stack(basis: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
        let n2 = basis[0].len();
        let cols: Vec<Complex64> = basis.iter().flat_map(|m| m.iter().copied()).collect();
        DMatrix::from_column_slice(n2, basis.len(), &cols)
    }

    #[test]
    fn spin_matrices_satisfy_commutation() {
        for n in [2, 3, 4] {
            let [j1, j2, j3] = spin_matrices(n);
            let comm = &j1 * &j2 - &j2 * &j1;
            let expect = &j3 * Complex64::new(0.0, 1.0);
            assert!((comm - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn sl2_north_pole_fiber_is_lower_triangular() {
        let fam = unipotent_family(SimpleAlgebra::Sl2, [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(fam.fiber_dim, 1);
        let m = &fam.fiber_basis[0];
        assert!(m[(0, 1)].norm() < 1e-14 && m[(0, 0)].norm() < 1e-14 && m[(1, 1)].norm() < 1e-14);
        assert!(m[(1, 0)].norm() > 0.5);
        assert_eq!(fam.splitting.degrees(), &[-2]);
        // the eigenline changes frame by −ζ²
        assert!(fam.transition.get(0, 0).approx_eq(&LaurentPolynomial::monomial(Complex64::new(-1.0, 0.0), 2), 1e-10));
    }

    /// `h⁰(E(m))` counted directly: matrix polynomials `X(ζ)` of degree `≤ m`
    /// with `Ad(exp(ζ J+)) X(ζ)` strictly lower triangular for every ζ.
    fn brute_force_h0(n: usize, m: usize) -> usize {
        let (jp, _) = ladder(n);
        // coefficients of exp(±ζ J+) as matrix polynomials
        let series = |sign: f64| -> Vec<DMatrix<Complex64>> {
            let mut out = vec![DMatrix::identity(n, n)];
            for k in 1..n {
                let next = &out[k - 1] * &jp * Complex64::new(sign / k as f64, 0.0);
                out.push(next);
            }
            out
        };
        let g = series(1.0);
        let ginv = series(-1.0);
        let top = m + 2 * (n - 1);
        let unknowns = n * n * (m + 1);
        let upper: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let mut map = DMatrix::<Complex64>::zeros(upper.len() * (top + 1), unknowns);
        let mut col = 0;
        for e in 0..=m {
            for a in 0..n {
                for b in 0..n {
                    for (p, gp) in g.iter().enumerate() {
                        for (q, gq) in ginv.iter().enumerate() {
                            let y = gp * unit(n, a, b) * gq;
                            for (r, &(i, j)) in upper.iter().enumerate() {
                                map[(r * (top + 1) + e + p + q, col)] += y[(i, j)];
                            }
                        }
                    }
                    col += 1;
                }
            }
        }
        crate::linalg::kernel_dim(&map, RANK_TOL)
    }

    #[test]
    fn sl3_family_splitting_matches_section_count() {
        let fam = unipotent_family(SimpleAlgebra::Sl3, [0.6, 0.0, 0.8]).unwrap();
        assert_eq!(fam.fiber_dim, 3);
        let counts: Vec<usize> = (0..6).map(|m| brute_force_h0(3, m)).collect();
        assert_eq!(counts, vec![0, 0, 1, 4, 7, 10]);
        for (m, &c) in counts.iter().enumerate() {
            assert_eq!(fam.splitting.h0_twisted(m as i64), c);
        }
        assert_eq!(fam.splitting.degrees(), &[-2, -3, -3]);
    }

    #[test]
    fn sl2_section_count_matches() {
        let counts: Vec<usize> = (0..5).map(|m| brute_force_h0(2, m)).collect();
        assert_eq!(counts, vec![0, 0, 1, 2, 3]);
    }

    #[test]
    fn holomorphic_frames_span_the_eigenspaces() {
        for n in [2, 3] {
            for x in sphere_samples() {
                let eig = column_space(&stack(&negative_eigenspace(n, x)), RANK_TOL);
                match stereographic(x) {
                    Some(z) => {
                        let near = column_space(&near_frame(n, z), RANK_TOL);
                        assert!(subspace_distance(&near, &eig) < 1e-9, "near chart at {x:?}");
                        if z.norm() > 1e-9 {
                            let far = column_space(&far_frame(n, z.inv()), RANK_TOL);
                            assert!(subspace_distance(&far, &eig) < 1e-9, "far chart at {x:?}");
                        }
                    }
                    None => {
                        let far = column_space(&far_frame(n, Complex64::new(0.0, 0.0)), RANK_TOL);
                        assert!(subspace_distance(&far, &eig) < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn non_unit_direction_is_rejected() {
        assert!(matches!(
            unipotent_family(SimpleAlgebra::Sl2, [0.0, 0.0, 2.0]),
            Err(LieError::NotUnitDirection(_))
        ));
    }
}
