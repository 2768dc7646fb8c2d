//! Grid checks of the Monge–Ampère determinant and sweeps over `λ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::eval_f;
use super::legendre::{kahler_potential_and_metric_from, solve_constraints, MetricReport};
use super::problem::{complex_pair, lambda_len, GltProblem, SectionPoint};
use super::GltError;

/// `n × n` grid `(z_c + s_i δz, u_c + s_j δu)` with offsets
/// `s_i = i − (n − 1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(with = "complex_pair")]
    pub center_z: Complex64,
    #[serde(with = "complex_pair")]
    pub center_u: Complex64,
    #[serde(with = "complex_pair")]
    pub step_z: Complex64,
    #[serde(with = "complex_pair")]
    pub step_u: Complex64,
    pub n: usize,
}

impl GridSpec {
    /// Points in row-major order (z offset outer).
    pub fn points(&self) -> Vec<(Complex64, Complex64)> {
        let mid = (self.n as f64 - 1.0) / 2.0;
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.push((
                    self.center_z + self.step_z * (i as f64 - mid),
                    self.center_u + self.step_u * (j as f64 - mid),
                ));
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MongeAmpereReport {
    /// `max |det − det_center|` over the grid.
    pub residual: f64,
    /// Determinant at the grid center.
    pub calibration: f64,
    pub determinants: Vec<f64>,
    pub max_symmetry_defect: f64,
    /// Metric at the grid center.
    pub center_metric: [[f64; 4]; 4],
    pub center_potential: f64,
}

/// Rejects integrands whose `F` is not real, using a fixed probe point over
/// the grid center.
pub fn reality_probe(p: &GltProblem, z: Complex64) -> Result<(), GltError> {
    let mut lower = vec![Complex64::new(0.0, 0.0); p.k + 1];
    lower[0] = z;
    for (i, w) in lower.iter_mut().enumerate().skip(1) {
        *w = Complex64::new(0.3 / i as f64, 0.2 / i as f64);
    }
    eval_f(p, &SectionPoint::from_lower_half(&lower))?.require_real()?;
    Ok(())
}

pub fn monge_ampere_residual(p: &GltProblem, grid: &GridSpec) -> Result<MongeAmpereReport, GltError> {
    p.validate()?;
    if grid.n == 0 {
        return Err(GltError::InvalidProblem("grid must have at least one point per side".into()));
    }
    reality_probe(p, grid.center_z)?;
    let center = kahler_potential_and_metric_from(p, grid.center_z, grid.center_u, None)?;
    let warm = center.section.clone();
    let reports: Vec<Result<MetricReport, GltError>> = grid
        .points()
        .into_par_iter()
        .map(|(z, u)| kahler_potential_and_metric_from(p, z, u, Some(&warm)))
        .collect();
    let reports: Vec<MetricReport> = reports.into_iter().collect::<Result<_, _>>()?;
    let determinants: Vec<f64> = reports.iter().map(|r| r.determinant).collect();
    let residual = determinants
        .iter()
        .map(|d| (d - center.determinant).abs())
        .fold(0.0, f64::max);
    let max_symmetry_defect = reports
        .iter()
        .map(|r| r.symmetry_defect)
        .fold(center.symmetry_defect, f64::max);
    Ok(MongeAmpereReport {
        residual,
        calibration: center.determinant,
        determinants,
        max_symmetry_defect,
        center_metric: center.metric,
        center_potential: center.potential,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub lambda: Vec<f64>,
    pub residual: Option<f64>,
    pub calibration: Option<f64>,
    pub center_metric: Option<[[f64; 4]; 4]>,
    pub error: Option<String>,
}

/// Runs [`monge_ampere_residual`] for each `λ`; rows keep the input order and
/// failures are recorded per row.
pub fn deformation_sweep(p: &GltProblem, lambdas: &[Vec<f64>], grid: &GridSpec) -> Vec<SweepRow> {
    lambdas
        .par_iter()
        .map(|lambda| {
            let q = p.clone().with_lambda(lambda.clone());
            match monge_ampere_residual(&q, grid) {
                Ok(r) => SweepRow {
                    lambda: lambda.clone(),
                    residual: Some(r.residual),
                    calibration: Some(r.calibration),
                    center_metric: Some(r.center_metric),
                    error: None,
                },
                Err(e) => SweepRow {
                    lambda: lambda.clone(),
                    residual: None,
                    calibration: None,
                    center_metric: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Step used to move along each `λ` axis.
const LAMBDA_PROBE_STEP: f64 = 1e-3;

/// Number of independent `λ` axis directions along which the constrained
/// section moves: the rank of the displacement of `(w_2, …, w_k)` under
/// `λ ↦ λ + δ e_j`. Directions whose solve fails do not count.
pub fn admissible_lambda_directions(p: &GltProblem, z: Complex64, u: Complex64) -> Result<usize, GltError> {
    let m = lambda_len(p.k);
    if m == 0 {
        return Ok(0);
    }
    let interior = |w: &[Complex64]| -> Vec<f64> {
        let mut v = Vec::with_capacity(m);
        for wi in &w[2..p.k] {
            v.push(wi.re);
            v.push(wi.im);
        }
        v.push(w[p.k].re);
        v
    };
    let base = interior(&solve_constraints(p, z, u)?.point.w);
    let mut columns = Vec::new();
    for j in 0..m {
        let mut lambda = p.lambda.clone();
        lambda[j] += LAMBDA_PROBE_STEP;
        if let Ok(s) = solve_constraints(&p.clone().with_lambda(lambda), z, u) {
            let moved = interior(&s.point.w);
            columns.extend(moved.iter().zip(&base).map(|(a, b)| (a - b) / LAMBDA_PROBE_STEP));
        }
    }
    if columns.is_empty() {
        return Ok(0);
    }
    let d = DMatrix::from_column_slice(m, columns.len() / m, &columns);
    let sv = d.svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    Ok(sv.iter().filter(|&&s| s > 1e-6 * smax).count())
}
