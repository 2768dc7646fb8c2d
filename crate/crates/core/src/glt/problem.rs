//! Problem description: integrand `G(η, ζ) = Σ c η^a ζ^b`, contours, and the
//! deformation vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GltError;
use crate::cp1::section::reality_sign;

/// Smallest node count accepted for a contour.
pub const MIN_NODES: usize = 64;
/// Reality condition tolerance for section points.
pub const POINT_REALITY_TOL: f64 = 1e-12;

/// One monomial `c η^a ζ^b` of the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "complex_pair")]
    pub coeff: Complex64,
    pub eta_power: u32,
    pub zeta_power: i64,
}

impl Term {
    pub fn new(coeff: Complex64, eta_power: u32, zeta_power: i64) -> Self {
        Self {
            coeff,
            eta_power,
            zeta_power,
        }
    }

    pub fn real(coeff: f64, eta_power: u32, zeta_power: i64) -> Self {
        Self::new(Complex64::new(coeff, 0.0), eta_power, zeta_power)
    }

    /// Image under the real structure for η a section of O(2k):
    /// `c η^a ζ^b ↦ (−1)^{ka+j} conj(c) η^a ζ^{−2ka−b−2}` with `j = −b−1`.
    pub fn real_partner(&self, k: usize) -> Term {
        let a = self.eta_power as i64;
        let ka = k as i64 * a;
        let j = -self.zeta_power - 1;
        let sign = if (ka + j).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Term {
            coeff: self.coeff.conj() * sign,
            eta_power: self.eta_power,
            zeta_power: -2 * ka - self.zeta_power - 2,
        }
    }
}

/// A circle `|ζ − center| = radius` traversed with the given orientation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    #[serde(with = "complex_pair")]
    pub center: Complex64,
    pub radius: f64,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

fn default_orientation() -> i8 {
    1
}

fn default_nodes() -> usize {
    MIN_NODES
}

impl ContourSpec {
    pub fn unit_circle() -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            orientation: 1,
            nodes: MIN_NODES,
        }
    }

    fn validate(&self) -> Result<(), GltError> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(GltError::InvalidProblem(format!("contour radius must be positive, got {}", self.radius)));
        }
        if self.orientation != 1 && self.orientation != -1 {
            return Err(GltError::InvalidProblem(format!(
                "contour orientation must be +1 or -1, got {}",
                self.orientation
            )));
        }
        if self.nodes < MIN_NODES {
            return Err(GltError::InvalidProblem(format!(
                "contour needs at least {MIN_NODES} nodes, got {}",
                self.nodes
            )));
        }
        Ok(())
    }
}

/// Function `F` on real sections of O(2k), generated by contour integrals of
/// `G(η(ζ), ζ)`, together with the values `λ` imposed on the constraints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GltProblem {
    pub k: usize,
    pub terms: Vec<Term>,
    #[serde(default = "default_contours")]
    pub contours: Vec<ContourSpec>,
    #[serde(default)]
    pub lambda: Vec<f64>,
}

fn default_contours() -> Vec<ContourSpec> {
    vec![ContourSpec::unit_circle()]
}

impl GltProblem {
    /// Unit-circle problem with `λ = 0`.
    pub fn new(k: usize, terms: Vec<Term>) -> Self {
        Self {
            k,
            terms,
            contours: default_contours(),
            lambda: vec![0.0; lambda_len(k)],
        }
    }

    /// Fills an omitted `λ` with zeros of the right length.
    pub fn with_default_lambda(mut self) -> Self {
        if self.lambda.is_empty() {
            self.lambda = vec![0.0; lambda_len(self.k)];
        }
        self
    }

    pub fn with_lambda(mut self, lambda: Vec<f64>) -> Self {
        self.lambda = lambda;
        self
    }

    /// Number of coordinates `w_0, …, w_{2k}`.
    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    pub fn validate(&self) -> Result<(), GltError> {
        if self.k == 0 {
            return Err(GltError::InvalidProblem("k must be at least 1".into()));
        }
        if self.lambda.len() != lambda_len(self.k) {
            return Err(GltError::InvalidProblem(format!(
                "lambda has length {}, expected {} for k = {}",
                self.lambda.len(),
                lambda_len(self.k),
                self.k
            )));
        }
        if self.contours.is_empty() {
            return Err(GltError::InvalidProblem("at least one contour is required".into()));
        }
        if self.terms.iter().any(|t| !t.coeff.re.is_finite() || !t.coeff.im.is_finite()) {
            return Err(GltError::InvalidProblem("integrand coefficients must be finite".into()));
        }
        self.contours.iter().try_for_each(ContourSpec::validate)
    }

    /// Largest mismatch between the integrand and its image under the real
    /// structure. Zero for reality-paired integrands.
    pub fn pairing_defect(&self) -> f64 {
        let collect = |terms: &mut dyn Iterator<Item = Term>| {
            let mut map: std::collections::BTreeMap<(u32, i64), Complex64> = Default::default();
            for t in terms {
                *map.entry((t.eta_power, t.zeta_power)).or_default() += t.coeff;
            }
            map
        };
        let own = collect(&mut self.terms.iter().copied());
        let image = collect(&mut self.terms.iter().map(|t| t.real_partner(self.k)));
        own.keys()
            .chain(image.keys())
            .map(|key| (own.get(key).copied().unwrap_or_default() - image.get(key).copied().unwrap_or_default()).norm())
            .fold(0.0, f64::max)
    }

    /// Averages the integrand with its image under the real structure.
    pub fn reality_paired(&self) -> Self {
        let mut terms: Vec<Term> = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            terms.push(Term { coeff: t.coeff * 0.5, ..*t });
            let p = t.real_partner(self.k);
            terms.push(Term { coeff: p.coeff * 0.5, ..p });
        }
        Self {
            terms,
            ..self.clone()
        }
    }
}

/// `max(0, 2k − 3)`: one real value per real constraint.
pub fn lambda_len(k: usize) -> usize {
    (2 * k).saturating_sub(3)
}

/// Sign `ε_i` in `w_{2k−i} = ε_i conj(w_i)`.
pub fn epsilon(k: usize, i: usize) -> f64 {
    reality_sign(k, i)
}

/// A point `w_0, …, w_{2k}` on the reality locus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    #[serde(with = "crate::cp1::section::complex_vec")]
    pub w: Vec<Complex64>,
}

impl SectionPoint {
    /// Checks the reality condition to [`POINT_REALITY_TOL`].
    pub fn new(w: Vec<Complex64>) -> Result<Self, GltError> {
        if w.len().is_multiple_of(2) {
            return Err(GltError::InvalidProblem(format!("a section of O(2k) has an odd number of coordinates, got {}", w.len())));
        }
        let p = Self { w };
        let defect = p.reality_defect();
        let scale = p.w.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if defect > POINT_REALITY_TOL * scale {
            return Err(GltError::NotRealPoint(defect));
        }
        Ok(p)
    }

    /// Point from its free coordinates `w_0, …, w_k` (`w_k` must be real).
    pub fn from_lower_half(lower: &[Complex64]) -> Self {
        let k = lower.len() - 1;
        let mut w = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        for (i, &c) in lower.iter().enumerate().take(k) {
            w[i] = c;
            w[2 * k - i] = c.conj() * epsilon(k, i);
        }
        w[k] = Complex64::new(lower[k].re, 0.0);
        Self { w }
    }

    pub fn k(&self) -> usize {
        self.w.len() / 2
    }

    pub fn reality_defect(&self) -> f64 {
        let k = self.k();
        (0..=2 * k)
            .map(|i| (self.w[2 * k - i] - self.w[i].conj() * epsilon(k, i)).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) mod complex_pair {
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

    #[test]
    fn standard_integrands_are_self_paired() {
        for k in 1..=4 {
            let p = GltProblem::new(k, vec![Term::real(1.0, 2, -(2 * k as i64) - 1)]);
            assert_eq!(p.pairing_defect(), 0.0, "k = {k}");
        }
        let p = GltProblem::new(2, vec![Term::real(1.0, 2, -5), Term::real(0.1, 3, -7)]);
        assert_eq!(p.pairing_defect(), 0.0);
    }

    #[test]
    fn unpaired_integrand_is_detected() {
        let p = GltProblem::new(1, vec![Term::real(1.0, 2, -2)]);
        assert!(p.pairing_defect() > 0.5);
        assert_eq!(p.reality_paired().pairing_defect(), 0.0);
    }

    #[test]
    fn pairing_is_an_involution() {
        let t = Term::new(Complex64::new(0.3, -1.2), 3, -4);
        for k in 1..=4 {
            assert_eq!(t.real_partner(k).real_partner(k), t);
        }
    }

    #[test]
    fn lambda_length_is_checked() {
        assert!(GltProblem::new(2, vec![]).validate().is_ok());
        assert!(GltProblem::new(2, vec![]).with_lambda(vec![]).validate().is_err());
        assert_eq!(lambda_len(1), 0);
        assert_eq!(lambda_len(3), 3);
    }

    #[test]
    fn section_points() {
        let p = SectionPoint::from_lower_half(&[Complex64::new(0.5, 0.2), Complex64::new(-0.1, 0.4), Complex64::new(0.3, 0.0)]);
        assert!(p.reality_defect() == 0.0);
        assert!(SectionPoint::new(p.w.clone()).is_ok());
        let mut bad = p.w.clone();
        bad[4] += Complex64::new(1e-6, 0.0);
        assert!(matches!(SectionPoint::new(bad), Err(GltError::NotRealPoint(_))));
    }

    #[test]
    fn problem_json() {
        let p: GltProblem = serde_json::from_str(
            r#"{"k":1,"terms":[{"coeff":[-1,0],"eta_power":2,"zeta_power":-3}]}"#,
        )
        .unwrap();
        assert_eq!(p.contours, vec![ContourSpec::unit_circle()]);
        assert!(p.validate().is_ok());
    }
}
