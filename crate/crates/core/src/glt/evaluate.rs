//! `F`, its gradient and Hessian at a point of the reality locus.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::problem::{GltProblem, SectionPoint};
use super::quadrature::{hessian_entrywise, integrals};
use super::{GltError, REALITY_TOL};

/// Value of `F` with the imaginary part left over by the quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FValue {
    pub value: f64,
    pub imag: f64,
    pub is_real: bool,
}

impl FValue {
    /// `Err(NotReal)` unless the imaginary part is within [`REALITY_TOL`].
    pub fn require_real(self) -> Result<f64, GltError> {
        if self.is_real {
            Ok(self.value)
        } else {
            Err(GltError::NotReal { imag: self.imag })
        }
    }
}

#[derive(Clone, Debug)]
pub struct HessianReport {
    /// `F_{w_i w_j}` computed entry by entry as `∮ ζ^i ζ^j G_ηη`.
    pub matrix: DMatrix<Complex64>,
    /// Largest spread along an antidiagonal `i + j = const`.
    pub pde_residual: f64,
    /// Hessian from Cauchy differentiation of the analytic gradient.
    pub cross_check: DMatrix<Complex64>,
    pub cross_check_residual: f64,
    /// `max |matrix − cross_check|`.
    pub cross_check_difference: f64,
}

fn check(p: &GltProblem, w: &SectionPoint) -> Result<(), GltError> {
    p.validate()?;
    if w.w.len() != p.dim() {
        return Err(GltError::InvalidProblem(format!(
            "point has {} coordinates, expected {} for k = {}",
            w.w.len(),
            p.dim(),
            p.k
        )));
    }
    Ok(())
}

pub fn eval_f(p: &GltProblem, w: &SectionPoint) -> Result<FValue, GltError> {
    check(p, w)?;
    let v = integrals(p, &w.w)?.value;
    Ok(FValue {
        value: v.re,
        imag: v.im,
        is_real: v.im.abs() <= REALITY_TOL,
    })
}

/// Holomorphic gradient `F_{w_i} = (1/2πi)∮ ζ^i G_η dζ`.
pub fn gradient_f(p: &GltProblem, w: &SectionPoint) -> Result<Vec<Complex64>, GltError> {
    check(p, w)?;
    Ok(integrals(p, &w.w)?.gradient)
}

/// Step and node count of the Cauchy-integral cross-check.
const CAUCHY_RADIUS: f64 = 1e-2;
const CAUCHY_NODES: usize = 16;

pub fn hessian_f(p: &GltProblem, w: &SectionPoint) -> Result<HessianReport, GltError> {
    check(p, w)?;
    let base = integrals(p, &w.w)?;
    let matrix = hessian_entrywise(p, &w.w, base.nodes);
    let n = p.dim();
    let mut cross = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for l in 0..CAUCHY_NODES {
            let e = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / CAUCHY_NODES as f64);
            let mut shifted = w.w.clone();
            shifted[j] += e * CAUCHY_RADIUS;
            let g = integrals(p, &shifted)?.gradient;
            let weight = e.conj() / (CAUCHY_RADIUS * CAUCHY_NODES as f64);
            for i in 0..n {
                cross[(i, j)] += g[i] * weight;
            }
        }
    }
    let cross_check_difference = (&matrix - &cross).iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(HessianReport {
        pde_residual: antidiagonal_spread(&matrix),
        cross_check_residual: antidiagonal_spread(&cross),
        matrix,
        cross_check: cross,
        cross_check_difference,
    })
}

/// `max_s max_{i+j=s, i'+j'=s} |H_ij − H_i'j'|`.
pub fn antidiagonal_spread(h: &DMatrix<Complex64>) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for s in 0..(2 * n).saturating_sub(1) {
        let entries: Vec<Complex64> = (0..n).filter(|&i| s >= i && s - i < n).map(|i| h[(i, s - i)]).collect();
        for a in 0..entries.len() {
            for b in a + 1..entries.len() {
                worst = worst.max((entries[a] - entries[b]).norm());
            }
        }
    }
    worst
}
