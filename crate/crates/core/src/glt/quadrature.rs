//! Trapezoidal contour integrals of the integrand and its η-derivatives.
//!
//! `Φ(w) = Σ_contours ± (1/2πi) ∮ G(η(ζ), ζ) dζ` with `η(ζ) = Σ w_i ζ^i`.
//! Derivatives come from differentiating under the integral:
//! `Φ_{w_i} = ∮ ζ^i G_η` and `Φ_{w_i w_j} = ∮ ζ^{i+j} G_ηη`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::problem::{ContourSpec, GltProblem, Term};
use super::GltError;

/// Target change between successive node doublings.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Largest change accepted when the node cap is reached.
pub const ACCEPT_TOL: f64 = 1e-8;
pub const MAX_NODES: usize = 1 << 16;

/// Value, gradient and the Hankel sums `h_s = ∮ ζ^s G_ηη`, `0 ≤ s ≤ 4k`.
#[derive(Clone, Debug)]
pub struct Integrals {
    pub value: Complex64,
    pub gradient: Vec<Complex64>,
    pub hankel: Vec<Complex64>,
    /// Largest node count used on any contour.
    pub nodes: usize,
}

impl Integrals {
    /// Hessian `Φ_{w_i w_j} = h_{i+j}`.
    pub fn hessian(&self) -> DMatrix<Complex64> {
        let n = self.gradient.len();
        DMatrix::from_fn(n, n, |i, j| self.hankel[i + j])
    }
}

#[derive(Clone, Copy)]
struct Derivs {
    g: Complex64,
    g1: Complex64,
    g2: Complex64,
}

fn integrand(terms: &[Term], eta: Complex64, zeta: Complex64) -> Derivs {
    let zero = Complex64::new(0.0, 0.0);
    let mut d = Derivs { g: zero, g1: zero, g2: zero };
    for t in terms {
        let a = t.eta_power as i32;
        let zb = t.coeff * zeta.powi(t.zeta_power as i32);
        d.g += zb * eta.powi(a);
        if a >= 1 {
            d.g1 += zb * (a as f64) * eta.powi(a - 1);
        }
        if a >= 2 {
            d.g2 += zb * (a as f64 * (a as f64 - 1.0)) * eta.powi(a - 2);
        }
    }
    d
}

fn horner(w: &[Complex64], zeta: Complex64) -> Complex64 {
    w.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * zeta + c)
}

/// Raw sums `Σ_nodes f(ζ_j) r e^{iθ_j}` over the given angles.
struct Accumulator {
    value: Complex64,
    gradient: Vec<Complex64>,
    hankel: Vec<Complex64>,
}

impl Accumulator {
    fn new(dim: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            value: zero,
            gradient: vec![zero; dim],
            hankel: vec![zero; 2 * dim - 1],
        }
    }

    fn add_nodes(&mut self, terms: &[Term], w: &[Complex64], c: &ContourSpec, angles: impl Iterator<Item = f64>) {
        for theta in angles {
            let e = Complex64::from_polar(1.0, theta);
            let zeta = c.center + e * c.radius;
            let weight = e * c.radius;
            let eta = horner(w, zeta);
            let d = integrand(terms, eta, zeta);
            self.value += d.g * weight;
            let mut zp = weight;
            for g in self.gradient.iter_mut() {
                *g += d.g1 * zp;
                zp *= zeta;
            }
            let mut zp = weight;
            for h in self.hankel.iter_mut() {
                *h += d.g2 * zp;
                zp *= zeta;
            }
        }
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            value: self.value * s,
            gradient: self.gradient.iter().map(|c| c * s).collect(),
            hankel: self.hankel.iter().map(|c| c * s).collect(),
        }
    }

    fn merge(&mut self, other: &Self) {
        self.value += other.value;
        for (a, b) in self.gradient.iter_mut().zip(&other.gradient) {
            *a += b;
        }
        for (a, b) in self.hankel.iter_mut().zip(&other.hankel) {
            *a += b;
        }
    }

    fn max_change(&self, other: &Self) -> f64 {
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(1.0);
        let mut m = rel(self.value, other.value);
        for (a, b) in self.gradient.iter().zip(&other.gradient) {
            m = m.max(rel(*a, *b));
        }
        for (a, b) in self.hankel.iter().zip(&other.hankel) {
            m = m.max(rel(*a, *b));
        }
        m
    }

    fn is_finite(&self) -> bool {
        let ok = |c: &Complex64| c.re.is_finite() && c.im.is_finite();
        ok(&self.value) && self.gradient.iter().all(ok) && self.hankel.iter().all(ok)
    }
}

/// `(1/2πi) ∮` over one circle, doubling the node count until successive
/// results agree to [`CONVERGENCE_TOL`].
fn integrate_contour(terms: &[Term], w: &[Complex64], c: &ContourSpec) -> Result<(Accumulator, usize), GltError> {
    let mut n = c.nodes;
    let mut raw = Accumulator::new(w.len());
    raw.add_nodes(terms, w, c, (0..n).map(|j| 2.0 * PI * j as f64 / n as f64));
    let mut current = raw.scaled(1.0 / n as f64);
    loop {
        // odd nodes of the refined grid
        let n2 = 2 * n;
        let mut odd = Accumulator::new(w.len());
        odd.add_nodes(terms, w, c, (0..n).map(|j| 2.0 * PI * (2 * j + 1) as f64 / n2 as f64));
        raw.merge(&odd);
        let refined = raw.scaled(1.0 / n2 as f64);
        if !refined.is_finite() {
            return Err(GltError::ContourSingular { change: f64::INFINITY });
        }
        let change = refined.max_change(&current);
        current = refined;
        n = n2;
        if change <= CONVERGENCE_TOL {
            break;
        }
        if n >= MAX_NODES {
            if change > ACCEPT_TOL {
                return Err(GltError::ContourSingular { change });
            }
            break;
        }
    }
    let sign = c.orientation as f64;
    Ok((current.scaled(sign), n))
}

/// All contour integrals at `w` (any complex vector of length `2k + 1`).
pub fn integrals(p: &GltProblem, w: &[Complex64]) -> Result<Integrals, GltError> {
    let mut total = Accumulator::new(w.len());
    let mut nodes = 0;
    for c in &p.contours {
        let (acc, n) = integrate_contour(&p.terms, w, c)?;
        total.merge(&acc);
        nodes = nodes.max(n);
    }
    Ok(Integrals {
        value: total.value,
        gradient: total.gradient,
        hankel: total.hankel,
        nodes,
    })
}

/// Hessian entries computed one by one as `∮ ζ^i ζ^j G_ηη`, without using the
/// Hankel structure.
pub fn hessian_entrywise(p: &GltProblem, w: &[Complex64], nodes: usize) -> DMatrix<Complex64> {
    let n = w.len();
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for c in &p.contours {
        let sign = c.orientation as f64 / nodes as f64;
        for j in 0..nodes {
            let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
            let zeta = c.center + e * c.radius;
            let weight = e * c.radius * sign;
            let g2 = integrand(&p.terms, horner(w, zeta), zeta).g2 * weight;
            let powers: Vec<Complex64> = (0..n).map(|i| zeta.powi(i as i32)).collect();
            for a in 0..n {
                for b in 0..n {
                    h[(a, b)] += powers[a] * g2 * powers[b];
                }
            }
        }
    }
    h
}
