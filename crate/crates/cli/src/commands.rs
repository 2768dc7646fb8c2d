//! One handler per subcommand: payload JSON in, report (and optional table)
//! out.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use twistor_core::glt::{
    self, deformation_sweep, eval_f, hessian_f, kahler_potential_and_metric, monge_ampere_residual, reality_probe,
    solve_constraints, GltProblem, GridSpec,
};
use twistor_core::lie::{self, nilpotency, unipotent_family, LieLiteral, SimpleAlgebra, TwistorLieAlgebra};
use twistor_core::monopole::{self, OrbitParameter, RationalMapPoint};
use twistor_core::quotient::{
    admissibility_check, check_action_constraints, deformation_space_dim, quotient_dimension, QuotientScenario,
};
use twistor_core::{cp1::BundleLiteral, BundleOnP1};

use crate::report::{cell, format_float, Table};
use crate::CliError;

pub struct Output {
    pub report: Value,
    pub table: Option<Table>,
}

/// Extra command-line settings for the GLT commands.
#[derive(Clone, Debug, Default)]
pub struct GltOverrides {
    pub grid: Option<usize>,
    pub lambda: Option<Vec<Vec<f64>>>,
}

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("invalid {what}: {e}")))
}

fn field<T: DeserializeOwned>(payload: &Value, key: &str) -> Result<T, CliError> {
    let v = payload
        .get(key)
        .ok_or_else(|| CliError::Config(format!("missing field {key:?}")))?;
    parse(v, key)
}

fn ser<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn pair(c: Complex64) -> Value {
    json!([c.re, c.im])
}

/// Verdict tolerances with their provenance.
struct Tolerances {
    entries: BTreeMap<String, (f64, &'static str)>,
}

impl Tolerances {
    /// Defaults, overridden by the payload's `tolerances` object.
    fn new(payload: &Value, defaults: &[(&str, f64)]) -> Result<Self, CliError> {
        let overrides: BTreeMap<String, f64> = match payload.get("tolerances") {
            Some(v) => parse(v, "tolerances")?,
            None => BTreeMap::new(),
        };
        let mut entries = BTreeMap::new();
        for &(name, value) in defaults {
            entries.insert(name.to_string(), (value, "default"));
        }
        for (name, value) in overrides {
            if !entries.contains_key(&name) {
                return Err(CliError::Config(format!("unknown tolerance {name:?}")));
            }
            if !(value > 0.0) {
                return Err(CliError::Config(format!("tolerance {name:?} must be positive")));
            }
            entries.insert(name, (value, "config"));
        }
        Ok(Self { entries })
    }

    fn get(&self, name: &str) -> f64 {
        self.entries[name].0
    }

    fn report(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .entries
            .iter()
            .map(|(k, (v, src))| (k.clone(), json!({"value": v, "source": src})))
            .collect();
        Value::Object(map)
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn bundle_split(payload: &Value) -> Result<Output, CliError> {
    let lit: BundleLiteral = parse(payload, "bundle payload")?;
    let bundle = BundleOnP1::try_from(lit).map_err(|e| CliError::Domain(e.to_string()))?;
    let splitting = bundle.splitting_type().map_err(|e| CliError::Domain(e.to_string()))?;
    let tol = Tolerances::new(payload, &[("rank_rel_tol", twistor_core::linalg::RANK_TOL)])?;
    Ok(Output {
        report: json!({
            "splitting": splitting.degrees(),
            "summands": splitting.to_string(),
            "rank": bundle.rank(),
            "degree": bundle.degree(),
            "h0": bundle.h0(),
            "h1": bundle.h1(),
            "tolerances": tol.report(),
        }),
        table: None,
    })
}

#[derive(Deserialize)]
struct UnipotentRequest {
    algebra: SimpleAlgebra,
    #[serde(default = "north_pole")]
    direction: [f64; 3],
}

fn north_pole() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

pub fn lie_validate(payload: &Value) -> Result<Output, CliError> {
    let tol = Tolerances::new(payload, &[("rank_rel_tol", twistor_core::linalg::RANK_TOL)])?;
    if let Some(req) = payload.get("unipotent") {
        let req: UnipotentRequest = parse(req, "unipotent request")?;
        let fam = unipotent_family(req.algebra, req.direction).map_err(|e| CliError::Domain(e.to_string()))?;
        return Ok(Output {
            report: json!({
                "unipotent": {
                    "algebra": ser(&fam.algebra),
                    "direction": fam.direction,
                    "zeta": fam.zeta.map(pair),
                    "fiber_dim": fam.fiber_dim,
                    "samples_checked": fam.samples_checked,
                    "splitting": fam.splitting.degrees(),
                    "transition": ser(&fam.transition),
                },
                "tolerances": tol.report(),
            }),
            table: None,
        });
    }
    let lit: LieLiteral = parse(payload, "Lie algebra payload")?;
    let algebra = TwistorLieAlgebra::try_from(&lit).map_err(|e| CliError::Domain(e.to_string()))?;
    let validation = algebra.validate();
    let mut report = json!({
        "validation": ser(&validation),
        "verdict": if validation.valid { "valid" } else { "invalid" },
        "tolerances": tol.report(),
    });
    if validation.valid {
        let nil = nilpotency(&algebra).map_err(|e| CliError::Domain(e.to_string()))?;
        report["nilpotency"] = json!({
            "is_negative": nil.is_negative,
            "class": nil.class,
            "series_dims": nil.series_dims,
        });
        match lie::maximal_negative_subalgebra(&algebra) {
            Ok(neg) => {
                report["negative_part"] = json!({
                    "splitting": neg.algebra.splitting(),
                    "embedding": neg.embedding,
                })
            }
            Err(e) => report["negative_part"] = json!({ "error": e.to_string() }),
        }
    }
    Ok(Output { report, table: None })
}

pub fn quotient_check(payload: &Value) -> Result<Output, CliError> {
    let s: QuotientScenario = parse(payload, "quotient scenario")?;
    let action = check_action_constraints(&s);
    let mut report = json!({
        "action": ser(&action),
        "verdict": if action.feasible { "feasible" } else { "infeasible" },
    });
    match quotient_dimension(s.n, s.lie_g.rank()) {
        Ok(d) => report["quotient_dimension"] = json!(d),
        Err(e) => report["quotient_dimension"] = json!({ "error": e.to_string() }),
    }
    if s.lie_g.degrees().iter().all(|&p| p < 0) && !s.lie_g.is_empty() {
        let d = deformation_space_dim(&s.lie_g).map_err(|e| CliError::Domain(e.to_string()))?;
        report["deformation_space_dim"] = ser(&d);
    }
    if s.lie_h.is_some() && s.embedding.is_some() {
        let a = admissibility_check(&s).map_err(|e| CliError::Domain(e.to_string()))?;
        report["verdict"] = ser(&a.verdict);
        report["admissibility"] = ser(&a);
    }
    Ok(Output { report, table: None })
}

fn glt_problem(payload: &Value, ov: &GltOverrides) -> Result<GltProblem, CliError> {
    let mut p: GltProblem = field(payload, "problem")?;
    p = p.with_default_lambda();
    if let Some(ls) = &ov.lambda {
        match ls.as_slice() {
            [one] => p.lambda = one.clone(),
            _ => return Err(CliError::Config("glt-run takes a single lambda vector".into())),
        }
    }
    p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(p)
}

fn glt_grid(payload: &Value, ov: &GltOverrides) -> Result<Option<GridSpec>, CliError> {
    let mut grid: Option<GridSpec> = match payload.get("grid") {
        Some(v) => Some(parse(v, "grid")?),
        None => None,
    };
    if let Some(n) = ov.grid {
        match grid.as_mut() {
            Some(g) => g.n = n,
            None => return Err(CliError::Config("--grid needs a grid in the config".into())),
        }
    }
    if grid.is_some_and(|g| g.n == 0) {
        return Err(CliError::Config("grid size must be positive".into()));
    }
    Ok(grid)
}

fn complex_field(payload: &Value, key: &str) -> Result<Complex64, CliError> {
    let [re, im]: [f64; 2] = field(payload, key)?;
    Ok(Complex64::new(re, im))
}

fn domain(e: glt::GltError) -> CliError {
    CliError::Domain(e.to_string())
}

pub fn glt_run(payload: &Value, ov: &GltOverrides) -> Result<Output, CliError> {
    let p = glt_problem(payload, ov)?;
    let grid = glt_grid(payload, ov)?;
    let z = complex_field(payload, "z")?;
    let u = complex_field(payload, "u")?;
    let tol = Tolerances::new(
        payload,
        &[
            ("hankel_tol", 1e-8),
            ("monge_ampere_tol", 1e-4),
            ("newton_tol", glt::legendre::NEWTON_TOL),
            ("reality_tol", glt::REALITY_TOL),
            ("symmetry_tol", 1e-6),
        ],
    )?;
    reality_probe(&p, z).map_err(domain)?;
    let section = solve_constraints(&p, z, u).map_err(domain)?;
    let f = eval_f(&p, &section.point).map_err(domain)?;
    let h = hessian_f(&p, &section.point).map_err(domain)?;
    let metric = kahler_potential_and_metric(&p, z, u).map_err(domain)?;
    let mut verdicts = json!({
        "hankel": verdict(h.pde_residual <= tol.get("hankel_tol")),
        "constraints": verdict(section.residual <= tol.get("newton_tol")),
        "reality": verdict(f.imag.abs() <= tol.get("reality_tol")),
        "metric_symmetry": verdict(metric.symmetry_defect <= tol.get("symmetry_tol")),
    });
    let mut report = json!({
        "section": section.point.w.iter().map(|c| pair(*c)).collect::<Vec<_>>(),
        "newton_iterations": section.iterations,
        "constraint_residual": section.residual,
        "f": ser(&f),
        "hessian": {
            "pde_residual": h.pde_residual,
            "cross_check_residual": h.cross_check_residual,
            "cross_check_difference": h.cross_check_difference,
        },
        "potential": metric.potential,
        "metric": metric.metric,
        "complex_hessian": metric.complex_hessian,
        "determinant": metric.determinant,
        "symmetry_defect": metric.symmetry_defect,
        "tolerances": tol.report(),
    });
    if let Some(g) = grid {
        let ma = monge_ampere_residual(&p, &g).map_err(domain)?;
        verdicts["monge_ampere"] = json!(verdict(ma.residual <= tol.get("monge_ampere_tol")));
        report["monge_ampere"] = json!({
            "residual": ma.residual,
            "calibration": ma.calibration,
            "grid_points": ma.determinants.len(),
            "max_symmetry_defect": ma.max_symmetry_defect,
        });
    }
    report["verdicts"] = verdicts;
    Ok(Output { report, table: None })
}

pub fn glt_sweep(payload: &Value, ov: &GltOverrides) -> Result<Output, CliError> {
    let mut p: GltProblem = field(payload, "problem")?;
    p = p.with_default_lambda();
    p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let grid = glt_grid(payload, ov)?.ok_or_else(|| CliError::Config("missing field \"grid\"".into()))?;
    let mut lambdas: Vec<Vec<f64>> = match &ov.lambda {
        Some(ls) => ls.clone(),
        None => field(payload, "lambdas")?,
    };
    let expected = glt::lambda_len(p.k);
    if let Some(bad) = lambdas.iter().find(|l| l.len() != expected) {
        return Err(CliError::Config(format!(
            "lambda {bad:?} has length {}, expected {expected} for k = {}",
            bad.len(),
            p.k
        )));
    }
    // rows come out in lexicographic λ order whatever the input order
    lambdas.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let tol = Tolerances::new(payload, &[("monge_ampere_tol", 1e-4)])?;
    let rows = deformation_sweep(&p, &lambdas, &grid);
    let t = tol.get("monge_ampere_tol");
    let mut table = Table::new(&[
        "lambda",
        "residual",
        "calibration",
        "g_xz_xz",
        "g_xu_xu",
        "g_xz_xu",
        "g_xz_yu",
        "verdict",
        "error",
    ]);
    let mut json_rows = Vec::new();
    for r in &rows {
        let row_verdict = match r.residual {
            Some(res) => verdict(res <= t),
            None => "error",
        };
        let m = r.center_metric;
        table.rows.push(vec![
            r.lambda.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(" "),
            cell(r.residual),
            cell(r.calibration),
            cell(m.map(|m| m[0][0])),
            cell(m.map(|m| m[2][2])),
            cell(m.map(|m| m[0][2])),
            cell(m.map(|m| m[0][3])),
            row_verdict.to_string(),
            r.error.clone().unwrap_or_default(),
        ]);
        json_rows.push(json!({
            "lambda": r.lambda,
            "residual": r.residual,
            "calibration": r.calibration,
            "center_metric": r.center_metric,
            "verdict": row_verdict,
            "error": r.error,
        }));
    }
    let all_pass = rows.iter().all(|r| r.residual.is_some_and(|x| x <= t));
    Ok(Output {
        report: json!({
            "rows": json_rows,
            "verdict": verdict(all_pass),
            "tolerances": tol.report(),
        }),
        table: Some(table),
    })
}

/// A point given by `a`, `c` and either `b` or the sign of the root
/// `b = ±sqrt(1 + c a²)`.
#[derive(Deserialize)]
struct PointInput {
    a: [f64; 2],
    c: [f64; 2],
    #[serde(default)]
    b: Option<[f64; 2]>,
    #[serde(default)]
    b_sign: Option<f64>,
}

impl PointInput {
    fn resolve(&self) -> Result<RationalMapPoint, CliError> {
        let z = |[re, im]: [f64; 2]| Complex64::new(re, im);
        match (self.b, self.b_sign) {
            (Some(b), None) => RationalMapPoint::new(z(self.a), z(b), z(self.c)).map_err(|e| CliError::Domain(e.to_string())),
            (None, sign) => {
                let sign = sign.unwrap_or(1.0);
                if sign != 1.0 && sign != -1.0 {
                    return Err(CliError::Config("b_sign must be 1 or -1".into()));
                }
                Ok(RationalMapPoint::from_a_c(z(self.a), z(self.c), sign))
            }
            (Some(_), Some(_)) => Err(CliError::Config("give either b or b_sign, not both".into())),
        }
    }
}

#[derive(Deserialize)]
struct AhPayload {
    point: PointInput,
    lambdas: Vec<[f64; 2]>,
    #[serde(default = "default_steps")]
    steps: Vec<f64>,
}

fn default_steps() -> Vec<f64> {
    vec![1e-3, 5e-4, 2.5e-4]
}

pub fn ah_orbit(payload: &Value) -> Result<Output, CliError> {
    let req: AhPayload = parse(payload, "orbit payload")?;
    if req.steps.iter().any(|&h| !(h > 0.0)) {
        return Err(CliError::Config("finite-difference steps must be positive".into()));
    }
    let m = req.point.resolve()?;
    let tol = Tolerances::new(
        payload,
        &[
            ("constraint_tol", monopole::CONSTRAINT_TOL),
            ("scaling_tol", 1e-12),
            ("stabilizer_tol", monopole::STABILIZER_TOL),
        ],
    )?;
    let beta = m.c.sqrt();
    let mut header = vec![
        "lambda_re".to_string(),
        "lambda_im".into(),
        "a_re".into(),
        "a_im".into(),
        "b_re".into(),
        "b_im".into(),
        "c_re".into(),
        "c_im".into(),
        "constraint_defect".into(),
        "scaling_defect".into(),
        "moment_re".into(),
        "moment_im".into(),
    ];
    header.extend(req.steps.iter().map(|h| format!("symplectic_residual_h{}", format_float(*h))));
    header.push("stabilizer".into());
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    let mut rows = Vec::new();
    let mut all_pass = true;
    for &[re, im] in &req.lambdas {
        let l = OrbitParameter::new(Complex64::new(re, im));
        let image = monopole::act(l, &m);
        let constraint = image.constraint_defect();
        let scaling = (image.p_at(beta) - (l.lambda * beta).exp() * m.p_at(beta)).norm();
        let symplectic: Vec<Result<f64, String>> = req
            .steps
            .iter()
            .map(|&h| monopole::symplectic_residual(l, &m, h).map_err(|e| e.to_string()))
            .collect();
        let stabilizer = monopole::stabilizer_check(l, &m);
        let pass = constraint <= tol.get("constraint_tol") && scaling <= tol.get("scaling_tol") * m.p_at(beta).norm().max(1.0);
        all_pass &= pass;
        let moment = monopole::moment_value(&image);
        let mut cells = vec![
            format_float(re),
            format_float(im),
            format_float(image.a.re),
            format_float(image.a.im),
            format_float(image.b.re),
            format_float(image.b.im),
            format_float(image.c.re),
            format_float(image.c.im),
            format_float(constraint),
            format_float(scaling),
            format_float(moment.re),
            format_float(moment.im),
        ];
        cells.extend(symplectic.iter().map(|r| cell(r.as_ref().ok().copied())));
        cells.push(stabilizer.to_string());
        table.rows.push(cells);
        rows.push(json!({
            "lambda": [re, im],
            "image": {"a": pair(image.a), "b": pair(image.b), "c": pair(image.c)},
            "constraint_defect": constraint,
            "scaling_defect": scaling,
            "moment": pair(moment),
            "moment_constant": moment == monopole::moment_value(&m),
            "symplectic_residuals": symplectic.iter().map(|r| match r {
                Ok(x) => json!(x),
                Err(e) => json!({"error": e}),
            }).collect::<Vec<_>>(),
            "stabilizer": stabilizer,
            "in_stabilizer_lattice": monopole::in_stabilizer_lattice(l, m.c, 1e-9),
            "verdict": verdict(pass),
        }));
    }
    Ok(Output {
        report: json!({
            "point": {"a": pair(m.a), "b": pair(m.b), "c": pair(m.c)},
            "moment": pair(monopole::moment_value(&m)),
            "steps": req.steps,
            "rows": rows,
            "verdict": verdict(all_pass),
            "tolerances": tol.report(),
        }),
        table: Some(table),
    })
}
