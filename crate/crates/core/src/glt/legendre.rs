//! Constrained Legendre transform.
//!
//! For `k = 1` the free coordinate is `w_1` (real) and the conjugate equation
//! is `F_{w_1} = u + ū`, with `K = F − (u + ū) w_1`.
//! For `k ≥ 2` the unknowns are `w_1` and `w_2, …, w_k` (`w_k` real), the
//! equations are `F_{w_1} = u` and `F_{w_i} = ℓ_i` for `2 ≤ i ≤ k`, where
//! `ℓ_i = λ_{2i−4} + iλ_{2i−3}` for `i < k` and `ℓ_k = λ_{2k−4}`; the mirrored
//! equations for `i > k` follow from reality. The potential is
//! `K = F − Σ_{i=2}^{2k−2} ℓ_i w_i − (u w_1 + ū w̄_1)`, so that
//! `K_z = F_{w_0}` and `K_u = −w_1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::problem::{epsilon, GltProblem, SectionPoint};
use super::quadrature::{integrals, Integrals};
use super::{GltError, REALITY_TOL};
use crate::linalg::{inverse_condition_real, solve_real};

pub const NEWTON_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 100;
pub const MAX_HALVINGS: usize = 20;
/// Reciprocal condition number below which the Newton Jacobian is singular.
const SINGULAR_RCOND: f64 = 1e-13;
/// Finite-difference step for the metric.
pub const METRIC_STEP: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct ConstrainedSection {
    pub point: SectionPoint,
    pub iterations: usize,
    pub residual: f64,
}

/// Layout of the real unknowns and equations for a given `k`.
struct Layout {
    k: usize,
    z: Complex64,
    u: Complex64,
    ell: Vec<Complex64>,
}

impl Layout {
    fn new(p: &GltProblem, z: Complex64, u: Complex64) -> Self {
        let k = p.k;
        let mut ell = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        if k >= 2 {
            for i in 2..k {
                ell[i] = Complex64::new(p.lambda[2 * i - 4], p.lambda[2 * i - 3]);
                ell[2 * k - i] = ell[i].conj() * epsilon(k, i);
            }
            ell[k] = Complex64::new(p.lambda[2 * k - 4], 0.0);
        }
        Self { k, z, u, ell }
    }

    fn unknowns(&self) -> usize {
        2 * self.k - 1
    }

    /// Index of the complex unknown `w_m` and whether it is real-only.
    fn slots(&self) -> Vec<(usize, bool)> {
        if self.k == 1 {
            return vec![(1, true)];
        }
        let mut s: Vec<(usize, bool)> = (1..self.k).map(|m| (m, false)).collect();
        s.push((self.k, true));
        s
    }

    fn point(&self, x: &[f64]) -> Vec<Complex64> {
        let k = self.k;
        let mut w = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        w[0] = self.z;
        w[2 * k] = self.z.conj() * epsilon(k, 0);
        let mut pos = 0;
        for (m, real) in self.slots() {
            let v = if real {
                Complex64::new(x[pos], 0.0)
            } else {
                Complex64::new(x[pos], x[pos + 1])
            };
            pos += if real { 1 } else { 2 };
            w[m] = v;
            if m != k {
                w[2 * k - m] = v.conj() * epsilon(k, m);
            }
        }
        w
    }

    fn unknowns_of(&self, w: &[Complex64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.unknowns());
        for (m, real) in self.slots() {
            x.push(w[m].re);
            if !real {
                x.push(w[m].im);
            }
        }
        x
    }

    /// Target value of `F_{w_m}`.
    fn target(&self, m: usize) -> Complex64 {
        if m == 1 {
            if self.k == 1 {
                Complex64::new(2.0 * self.u.re, 0.0)
            } else {
                self.u
            }
        } else {
            self.ell[m]
        }
    }

    fn residual(&self, r: &Integrals) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.unknowns());
        for (m, real) in self.slots() {
            let d = r.gradient[m] - self.target(m);
            out.push(d.re);
            if !real {
                out.push(d.im);
            }
        }
        DVector::from_vec(out)
    }

    /// Jacobian of [`Self::residual`] with respect to the real unknowns.
    fn jacobian(&self, r: &Integrals) -> DMatrix<f64> {
        let k = self.k;
        let h = r.hessian();
        let n = self.unknowns();
        let mut jac = DMatrix::<f64>::zeros(n, n);
        let i_unit = Complex64::new(0.0, 1.0);
        // derivative of F_{w_i} along each real direction
        let mut col = 0;
        for (m, real) in self.slots() {
            let dim = 2 * k + 1;
            let dirs: Vec<Vec<Complex64>> = if real {
                vec![(0..dim).map(|i| h[(i, m)]).collect()]
            } else {
                let e = epsilon(k, m);
                vec![
                    (0..dim).map(|i| h[(i, m)] + h[(i, 2 * k - m)] * e).collect(),
                    (0..dim).map(|i| (h[(i, m)] - h[(i, 2 * k - m)] * e) * i_unit).collect(),
                ]
            };
            for d in dirs {
                let mut row = 0;
                for (i, real_eq) in self.slots() {
                    let v = d[i];
                    jac[(row, col)] = v.re;
                    if !real_eq {
                        jac[(row + 1, col)] = v.im;
                    }
                    row += if real_eq { 1 } else { 2 };
                }
                col += 1;
            }
        }
        jac
    }

    /// `K = Re(F − L − 2 Re(u w_1))`, or `F − (u + ū) w_1` for `k = 1`.
    fn potential(&self, w: &[Complex64], f: Complex64) -> f64 {
        let k = self.k;
        if k == 1 {
            return f.re - 2.0 * self.u.re * w[1].re;
        }
        let lagrange: Complex64 = (2..=2 * k - 2).map(|i| self.ell[i] * w[i]).sum();
        (f - lagrange).re - 2.0 * (self.u * w[1]).re
    }
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves the constraint and conjugate equations at `(z, u)`, starting from
/// `w_i = 0` (`i ≥ 1`).
pub fn solve_constraints(p: &GltProblem, z: Complex64, u: Complex64) -> Result<ConstrainedSection, GltError> {
    solve_constraints_from(p, z, u, None)
}

/// As [`solve_constraints`], starting from `guess` when given.
pub fn solve_constraints_from(
    p: &GltProblem,
    z: Complex64,
    u: Complex64,
    guess: Option<&SectionPoint>,
) -> Result<ConstrainedSection, GltError> {
    p.validate()?;
    let layout = Layout::new(p, z, u);
    let mut x = match guess {
        Some(g) if g.w.len() == p.dim() => DVector::from_vec(layout.unknowns_of(&g.w)),
        _ => DVector::zeros(layout.unknowns()),
    };
    let mut state = integrals(p, &layout.point(x.as_slice()))?;
    let mut res = layout.residual(&state);
    let mut norm = max_abs(&res);
    let mut iterations = 0;
    let mut polished = false;
    loop {
        if norm <= NEWTON_TOL {
            if polished {
                break;
            }
            polished = true;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(GltError::NoConvergence {
                iterations,
                residual: norm,
            });
        }
        iterations += 1;
        let jac = layout.jacobian(&state);
        if inverse_condition_real(&jac) < SINGULAR_RCOND {
            return Err(GltError::Degenerate(format!(
                "constraint Jacobian is singular at z = {z}, u = {u}"
            )));
        }
        let step = solve_real(&jac, &(-&res))
            .ok_or_else(|| GltError::Degenerate(format!("constraint Jacobian is singular at z = {z}, u = {u}")))?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = &x + &step * t;
            if let Ok(s) = integrals(p, &layout.point(trial.as_slice())) {
                let r = layout.residual(&s);
                let n = max_abs(&r);
                if n < norm || (polished && n <= NEWTON_TOL) {
                    accepted = Some((trial, s, r, n));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((nx, s, r, n)) => {
                x = nx;
                state = s;
                res = r;
                norm = n;
            }
            // the polishing step may fail to improve a converged point
            None if polished => break,
            None => {
                return Err(GltError::NoConvergence {
                    iterations,
                    residual: norm,
                })
            }
        }
    }
    Ok(ConstrainedSection {
        point: SectionPoint {
            w: layout.point(x.as_slice()),
        },
        iterations,
        residual: norm,
    })
}

/// `K` and its Wirtinger derivatives `K_z`, `K_u` at a solved section.
#[derive(Clone, Debug)]
pub struct PotentialPoint {
    pub potential: f64,
    pub k_z: Complex64,
    pub k_u: Complex64,
    pub section: ConstrainedSection,
}

pub fn kahler_potential(
    p: &GltProblem,
    z: Complex64,
    u: Complex64,
    guess: Option<&SectionPoint>,
) -> Result<PotentialPoint, GltError> {
    let section = solve_constraints_from(p, z, u, guess)?;
    let r = integrals(p, &section.point.w)?;
    if r.value.im.abs() > REALITY_TOL {
        return Err(GltError::NotReal { imag: r.value.im });
    }
    let layout = Layout::new(p, z, u);
    Ok(PotentialPoint {
        potential: layout.potential(&section.point.w, r.value),
        k_z: r.gradient[0],
        k_u: -section.point.w[1],
        section,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub potential: f64,
    /// Real metric in coordinates `(Re z, Im z, Re u, Im u)`.
    pub metric: [[f64; 4]; 4],
    /// `[[K_zz̄, K_zū], [K_uz̄, K_uū]]`.
    pub complex_hessian: [[[f64; 2]; 2]; 2],
    /// `K_zz̄ K_uū − K_zū K_uz̄`.
    pub determinant: f64,
    /// Largest asymmetry of the finite-difference real Hessian.
    pub symmetry_defect: f64,
    #[serde(skip)]
    pub section: SectionPoint,
}

fn real_gradient(pp: &PotentialPoint) -> [f64; 4] {
    [2.0 * pp.k_z.re, -2.0 * pp.k_z.im, 2.0 * pp.k_u.re, -2.0 * pp.k_u.im]
}

/// Potential and metric at `(z, u)`. The metric comes from central
/// differences of the analytic gradient `(K_z, K_u)` with step
/// [`METRIC_STEP`], Richardson-extrapolated once.
pub fn kahler_potential_and_metric(p: &GltProblem, z: Complex64, u: Complex64) -> Result<MetricReport, GltError> {
    kahler_potential_and_metric_from(p, z, u, None)
}

pub fn kahler_potential_and_metric_from(
    p: &GltProblem,
    z: Complex64,
    u: Complex64,
    guess: Option<&SectionPoint>,
) -> Result<MetricReport, GltError> {
    let center = kahler_potential(p, z, u, guess)?;
    let warm = center.section.point.clone();
    let q0 = [z.re, z.im, u.re, u.im];
    let grad_at = |q: [f64; 4]| -> Result<[f64; 4], GltError> {
        let pp = kahler_potential(p, Complex64::new(q[0], q[1]), Complex64::new(q[2], q[3]), Some(&warm))?;
        Ok(real_gradient(&pp))
    };
    let difference = |h: f64| -> Result<[[f64; 4]; 4], GltError> {
        let mut d = [[0.0; 4]; 4];
        for j in 0..4 {
            let mut plus = q0;
            let mut minus = q0;
            plus[j] += h;
            minus[j] -= h;
            let gp = grad_at(plus)?;
            let gm = grad_at(minus)?;
            for i in 0..4 {
                d[i][j] = (gp[i] - gm[i]) / (2.0 * h);
            }
        }
        Ok(d)
    };
    let coarse = difference(METRIC_STEP)?;
    let fine = difference(METRIC_STEP / 2.0)?;
    let mut real_hessian = [[0.0; 4]; 4];
    let mut symmetry_defect = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            real_hessian[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            symmetry_defect = symmetry_defect.max((real_hessian[i][j] - real_hessian[j][i]).abs());
        }
    }
    let r = |i: usize, j: usize| 0.5 * (real_hessian[i][j] + real_hessian[j][i]);
    // h_{ab̄} = ¼(R_xx + R_yy + i(R_xy − R_yx)); a, b ∈ {z, u} at offsets 0, 2
    let mut h = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
            h[a][b] = Complex64::new(r(xa, xb) + r(ya, yb), r(xa, yb) - r(ya, xb)) * 0.25;
        }
    }
    let mut metric = [[0.0; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            let (re, im) = (h[a][b].re, h[a][b].im);
            metric[2 * a][2 * b] = 2.0 * re;
            metric[2 * a + 1][2 * b + 1] = 2.0 * re;
            metric[2 * a][2 * b + 1] = 2.0 * im;
            metric[2 * a + 1][2 * b] = -2.0 * im;
        }
    }
    let determinant = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).re;
    let complex_hessian = [
        [[h[0][0].re, h[0][0].im], [h[0][1].re, h[0][1].im]],
        [[h[1][0].re, h[1][0].im], [h[1][1].re, h[1][1].im]],
    ];
    Ok(MetricReport {
        potential: center.potential,
        metric,
        complex_hessian,
        determinant,
        symmetry_defect,
        section: warm,
    })
}

/// Rank of the interior constraint map `(w_2, …, w_k) ↦ (F_{w_2}, …, F_{w_k})`
/// (real Jacobian) at the solved section over `(z, u)`.
pub fn constraint_rank(p: &GltProblem, z: Complex64, u: Complex64) -> Result<usize, GltError> {
    let section = solve_constraints(p, z, u)?;
    let layout = Layout::new(p, z, u);
    let jac = layout.jacobian(&integrals(p, &section.point.w)?);
    // interior block: drop the rows and columns of w_1
    let skip = if p.k == 1 { 1 } else { 2 };
    let n = layout.unknowns() - skip;
    if n == 0 {
        return Ok(0);
    }
    let block = jac.view((skip, skip), (n, n)).into_owned();
    let sv = block.svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    Ok(sv.iter().filter(|&&s| s > smax * crate::linalg::RANK_TOL).count())
}

#[cfg(test)]
mod tests {
    use super::super::problem::Term;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_k2_constraints() {
        // F = 2|z|² − 2|w1|² + w2²: w1 = −ū/2, w2 = λ/2
        let z = c(0.3, -0.2);
        let u = c(0.5, 0.4);
        for lambda in [0.0, 0.3] {
            let p = GltProblem::new(2, vec![Term::real(1.0, 2, -5)]).with_lambda(vec![lambda]);
            let s = solve_constraints(&p, z, u).unwrap();
            assert!((s.point.w[1] - u.conj() * -0.5).norm() < 1e-12);
            assert!((s.point.w[2] - c(lambda / 2.0, 0.0)).norm() < 1e-12);
            assert!(s.residual <= NEWTON_TOL);
            assert!(s.point.reality_defect() < 1e-15);
        }
    }

    #[test]
    fn flat_k1_legendre() {
        // F = 2|z|² − w1²; −2 w1 = u + ū
        let p = GltProblem::new(1, vec![Term::real(-1.0, 2, -3)]);
        let z = c(0.3, -0.2);
        let u = c(0.5, 0.4);
        let pp = kahler_potential(&p, z, u, None).unwrap();
        assert!((pp.section.point.w[1] - c(-0.5, 0.0)).norm() < 1e-12);
        let expect = 2.0 * z.norm_sqr() + (2.0 * u.re).powi(2) / 4.0;
        assert!((pp.potential - expect).abs() < 1e-12);
    }

    #[test]
    fn flat_metric() {
        let p = GltProblem::new(1, vec![Term::real(-1.0, 2, -3)]);
        let m = kahler_potential_and_metric(&p, c(0.3, -0.2), c(0.5, 0.4)).unwrap();
        assert!((m.determinant - 1.0).abs() < 1e-10);
        // h = diag(2, 1/2)
        let expect = [[4.0, 0.0, 0.0, 0.0], [0.0, 4.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        for i in 0..4 {
            for j in 0..4 {
                assert!((m.metric[i][j] - expect[i][j]).abs() < 1e-9, "{i}{j}: {}", m.metric[i][j]);
            }
        }
    }

    #[test]
    fn zero_integrand_is_degenerate() {
        let p = GltProblem::new(2, vec![]);
        assert!(matches!(
            kahler_potential_and_metric(&p, c(0.1, 0.0), c(0.2, 0.0)),
            Err(GltError::Degenerate(_))
        ));
    }

    #[test]
    fn unpaired_integrand_is_flagged() {
        let p = GltProblem::new(1, vec![Term::real(-1.0, 2, -3), Term::real(0.5, 2, -2)]);
        assert!(matches!(kahler_potential(&p, c(0.3, 0.2), c(0.1, 0.0), None), Err(GltError::NotReal { .. })));
    }

    #[test]
    fn interior_rank_counts_constraints() {
        for k in 2..=6 {
            let p = GltProblem::new(k, vec![Term::real(1.0, 2, -(2 * k as i64) - 1)]);
            assert_eq!(constraint_rank(&p, c(0.2, 0.1), c(0.3, -0.1)).unwrap(), 2 * k - 3, "k = {k}");
        }
    }
}
