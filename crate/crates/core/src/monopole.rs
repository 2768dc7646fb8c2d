//! The O(−2) action on rational maps `p(z) = az + b` of the strongly centred
//! charge-2 monopole space, `b² − c a² = 1`, at a fixed twistor fiber.
//!
//! With `β² = c`, `λ` acts by
//! `a' = cosh(λβ) a + sinh(λβ)/β · b`, `b' = β sinh(λβ) a + cosh(λβ) b`,
//! `c' = c`, so that `p(β) = aβ + b ↦ e^{λβ} p(β)`. The entries are even in
//! `β` and are evaluated through entire functions of `λ²c`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glt::problem::complex_pair;

/// Tolerance on `b² − c a² = 1`, relative to `max(1, |b|², |c a²|)`.
pub const CONSTRAINT_TOL: f64 = 1e-12;
/// Tolerance of [`stabilizer_check`], relative to `max(1, |a|, |b|)`.
pub const STABILIZER_TOL: f64 = 1e-10;
/// Below this `|λ²c|` the power series are used.
const SERIES_RADIUS: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonopoleError {
    #[error("point violates b^2 - c a^2 = 1 by {0:e}")]
    OffConstraint(f64),
    #[error("outside the chart of the symplectic form: {0}")]
    OutsideChart(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMapPoint {
    #[serde(with = "complex_pair")]
    pub a: Complex64,
    #[serde(with = "complex_pair")]
    pub b: Complex64,
    #[serde(with = "complex_pair")]
    pub c: Complex64,
}

impl RationalMapPoint {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self, MonopoleError> {
        let m = Self::unchecked(a, b, c);
        let defect = m.constraint_defect();
        if defect > CONSTRAINT_TOL {
            return Err(MonopoleError::OffConstraint(defect));
        }
        Ok(m)
    }

    pub fn unchecked(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    /// Point with `b = ±sqrt(1 + c a²)` (principal root times `sign`).
    pub fn from_a_c(a: Complex64, c: Complex64, sign: f64) -> Self {
        let b = (Complex64::new(1.0, 0.0) + c * a * a).sqrt() * sign;
        Self { a, b, c }
    }

    /// Relative defect of `b² − c a² = 1`.
    pub fn constraint_defect(&self) -> f64 {
        let ca2 = self.c * self.a * self.a;
        let scale = 1f64.max(self.b.norm_sqr()).max(ca2.norm());
        (self.b * self.b - ca2 - 1.0).norm() / scale
    }

    /// `p(β) = aβ + b`.
    pub fn p_at(&self, beta: Complex64) -> Complex64 {
        self.a * beta + self.b
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [(self.a - other.a), (self.b - other.b), (self.c - other.c)]
            .iter()
            .map(|d| d.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitParameter {
    #[serde(with = "complex_pair")]
    pub lambda: Complex64,
}

impl OrbitParameter {
    pub fn new(lambda: Complex64) -> Self {
        Self { lambda }
    }
}

/// `(cosh √x, sinh √x / √x)`, entire in `x`.
pub fn cosh_sinhc(x: Complex64) -> (Complex64, Complex64) {
    if x.norm() < SERIES_RADIUS {
        let mut ch = Complex64::new(0.0, 0.0);
        let mut sh = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0); // x^n / (2n)!
        for n in 0..10 {
            ch += term;
            sh += term / (2.0 * n as f64 + 1.0);
            term *= x / ((2.0 * n as f64 + 1.0) * (2.0 * n as f64 + 2.0));
        }
        (ch, sh)
    } else {
        let s = x.sqrt();
        (s.cosh(), s.sinh() / s)
    }
}

pub fn act(lambda: OrbitParameter, m: &RationalMapPoint) -> RationalMapPoint {
    let l = lambda.lambda;
    let (ch, sh) = cosh_sinhc(l * l * m.c);
    // sinh(λβ)/β = λ·sh, β sinh(λβ) = λc·sh
    RationalMapPoint {
        a: ch * m.a + l * sh * m.b,
        b: l * m.c * sh * m.a + ch * m.b,
        c: m.c,
    }
}

/// The action written with an explicit root `β` of `c` (`β ≠ 0`).
pub fn act_with_root(lambda: OrbitParameter, m: &RationalMapPoint, beta: Complex64) -> RationalMapPoint {
    let lb = lambda.lambda * beta;
    RationalMapPoint {
        a: lb.cosh() * m.a + lb.sinh() / beta * m.b,
        b: beta * lb.sinh() * m.a + lb.cosh() * m.b,
        c: m.c,
    }
}

/// `μ = c/2`.
pub fn moment_value(m: &RationalMapPoint) -> Complex64 {
    m.c * 0.5
}

/// Tangent vector `(da, db, dc)`.
pub type Tangent = [Complex64; 3];

/// Principal root of `c`; the symplectic form is defined where `c ≠ 0` and
/// `p(β) ≠ 0`.
fn chart_root(m: &RationalMapPoint) -> Result<Complex64, MonopoleError> {
    if m.c.norm() == 0.0 {
        return Err(MonopoleError::OutsideChart("c = 0"));
    }
    let beta = m.c.sqrt();
    if m.p_at(beta).norm() == 0.0 {
        return Err(MonopoleError::OutsideChart("p(beta) = 0"));
    }
    Ok(beta)
}

/// `ω(X, Y)` for `ω = dp(β)/p(β) ∧ dβ`, `dp(β) = β da + db + a dβ`,
/// `dβ = dc / 2β`.
pub fn omega(m: &RationalMapPoint, beta: Complex64, x: &Tangent, y: &Tangent) -> Complex64 {
    let p = m.p_at(beta);
    let dbeta = |t: &Tangent| t[2] / (beta * 2.0);
    let dp = |t: &Tangent| beta * t[0] + t[1] + m.a * dbeta(t);
    (dp(x) * dbeta(y) - dp(y) * dbeta(x)) / p
}

/// Local coordinates on the constraint surface.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Chart {
    /// `(a, c)` with `b` solved for; needs `b ≠ 0`.
    AC,
    /// `(b, c)` with `a` solved for; needs `a ≠ 0`.
    BC,
}

fn pick_chart(m: &RationalMapPoint) -> Chart {
    if m.b.norm() >= (m.c * m.a).norm() {
        Chart::AC
    } else {
        Chart::BC
    }
}

/// Coordinate tangent vectors of the chart at `m`.
fn chart_tangents(m: &RationalMapPoint, chart: Chart) -> [Tangent; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match chart {
        Chart::AC => [
            [one, m.c * m.a / m.b, zero],
            [zero, m.a * m.a / (m.b * 2.0), one],
        ],
        Chart::BC => [
            [m.b / (m.c * m.a), one, zero],
            [-m.a / (m.c * 2.0), zero, one],
        ],
    }
}

/// Point of the chart at coordinates shifted by `(d1, d2)`, taking the root
/// nearest to `m`.
fn chart_point(m: &RationalMapPoint, chart: Chart, d1: Complex64, d2: Complex64) -> RationalMapPoint {
    let c = m.c + d2;
    let nearest = |r: Complex64, reference: Complex64| if (r - reference).norm() <= (r + reference).norm() { r } else { -r };
    match chart {
        Chart::AC => {
            let a = m.a + d1;
            let b = nearest((Complex64::new(1.0, 0.0) + c * a * a).sqrt(), m.b);
            RationalMapPoint { a, b, c }
        }
        Chart::BC => {
            let b = m.b + d1;
            let a = nearest(((b * b - 1.0) / c).sqrt(), m.a);
            RationalMapPoint { a, b, c }
        }
    }
}

/// Chart coordinates `(a, c)` or `(b, c)` of a point.
fn chart_coordinate(m: &RationalMapPoint, chart: Chart) -> Complex64 {
    match chart {
        Chart::AC => m.a,
        Chart::BC => m.b,
    }
}

/// Compares `ω` on the chart coordinate vectors at `m` with `ω` on their
/// images under `φ = act(λ, ·)`, the pushforward being the central-difference
/// Jacobian of `φ` in chart coordinates with step `h`. Returns
/// `|ω_{φ(m)}(φ_* ∂_1, φ_* ∂_2) − ω_m(∂_1, ∂_2)|`.
pub fn symplectic_residual(lambda: OrbitParameter, m: &RationalMapPoint, h: f64) -> Result<f64, MonopoleError> {
    let beta = chart_root(m)?;
    let image = act(lambda, m);
    if image.p_at(beta).norm() == 0.0 {
        return Err(MonopoleError::OutsideChart("p(beta) = 0 at the image"));
    }
    // a chart valid at both ends
    let chart = if pick_chart(m) == pick_chart(&image) {
        pick_chart(m)
    } else if m.b.norm().min(image.b.norm()) >= (m.c * m.a).norm().min((image.c * image.a).norm()) {
        Chart::AC
    } else {
        Chart::BC
    };
    let zero = Complex64::new(0.0, 0.0);
    let step = Complex64::new(h, 0.0);
    let column = |d1: Complex64, d2: Complex64| -> [Complex64; 2] {
        let plus = act(lambda, &chart_point(m, chart, d1, d2));
        let minus = act(lambda, &chart_point(m, chart, -d1, -d2));
        [
            (chart_coordinate(&plus, chart) - chart_coordinate(&minus, chart)) / (2.0 * h),
            (plus.c - minus.c) / (2.0 * h),
        ]
    };
    let j1 = column(step, zero);
    let j2 = column(zero, step);
    let jac_det = j1[0] * j2[1] - j2[0] * j1[1];
    let [x, y] = chart_tangents(m, chart);
    let [xi, yi] = chart_tangents(&image, chart);
    Ok((omega(&image, beta, &xi, &yi) * jac_det - omega(m, beta, &x, &y)).norm())
}

/// `max |ω(X, Y) − dμ(Y)|` over the chart tangents `Y`, where `X = (b, ca, 0)`
/// generates the action.
pub fn moment_defect(m: &RationalMapPoint) -> Result<f64, MonopoleError> {
    let beta = chart_root(m)?;
    let generator: Tangent = [m.b, m.c * m.a, Complex64::new(0.0, 0.0)];
    Ok(chart_tangents(m, pick_chart(m))
        .iter()
        .map(|y| (omega(m, beta, &generator, y) - y[2] * 0.5).norm())
        .fold(0.0, f64::max))
}

/// Whether `act(λ, m) = m` to [`STABILIZER_TOL`].
pub fn stabilizer_check(lambda: OrbitParameter, m: &RationalMapPoint) -> bool {
    let scale = 1f64.max(m.a.norm()).max(m.b.norm());
    act(lambda, m).max_abs_diff(m) <= STABILIZER_TOL * scale
}

/// Whether `λβ ∈ 2πi ℤ` to within `tol`.
pub fn in_stabilizer_lattice(lambda: OrbitParameter, c: Complex64, tol: f64) -> bool {
    let t = lambda.lambda * c.sqrt() / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    (t.re - t.re.round()).abs() <= tol && t.im.abs() <= tol
}
