//! Subcommand bodies: each turns a loaded scene into report results.

use std::path::PathBuf;

use ftquad::comparison::{comparative_plasticity, glue_quad, GlueCase, DEFECT_TOL};
use ftquad::config::{
    angular_perimeter_check, convexity_check, extract_angular, realize_vertices, vertex_perimeter_check, AngularConfig,
    AngularSpec, Directions, QuadPosition, QuadScene, SceneFile, SceneGeometry,
};
use ftquad::forward::{solve_forward, stationarity_residual, FtResult, FtStatus, SolverOptions};
use ftquad::inverse::{diagonal_case, plasticity_line, plasticity_line_closed_form, sign_report};
use ftquad::kplane::Curvature;
use ftquad::symmetry::{direct_parallelogram_check, symmetrize, symmetrize_with_tolerance, ClassChoice};
use ftquad::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::svg;

/// Relative stationarity residual (against `Σ w`) above which `check`
/// fails; between the exact tolerance and this it passes with a warning.
const RESIDUAL_FAIL: f64 = 1e-2;

pub struct Outcome {
    pub results: Value,
    pub warnings: Vec<String>,
    pub exit_code: u8,
}

pub struct Failure {
    pub exit_code: u8,
    pub kind: String,
    pub message: String,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl Failure {
    pub fn io(message: String, results: Value, warnings: Vec<String>) -> Self {
        Failure { exit_code: 1, kind: "Io".into(), message, results, warnings }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (exit_code, results) = match &e {
            Error::NoConvergence { best } => (2, json!({ "best": to_value(best.as_ref()) })),
            Error::SingularSystem { .. }
            | Error::NoClassApplicable
            | Error::PatternMismatch(_)
            | Error::NoRoot { .. }
            | Error::NotOnDiagonal => (3, Value::Null),
            _ => (1, Value::Null),
        };
        let results = match &e {
            Error::NoRoot { defect_lo, defect_hi } => json!({ "defect_range": [defect_lo, defect_hi] }),
            _ => results,
        };
        Failure { exit_code, kind: error_kind(&e).into(), message: e.to_string(), results, warnings: Vec::new() }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidCurvature(_) => "InvalidCurvature",
        Error::InvalidPoint(_) => "InvalidPoint",
        Error::AntipodalPoints => "AntipodalPoints",
        Error::StepTooLong { .. } => "StepTooLong",
        Error::DegenerateArc => "DegenerateArc",
        Error::TriangleInequalityViolated { .. } => "TriangleInequalityViolated",
        Error::PerimeterTooLarge { .. } => "PerimeterTooLarge",
        Error::InvalidScene(_) => "InvalidScene",
        Error::NoConvergence { .. } => "NoConvergence",
        Error::SingularSystem { .. } => "SingularSystem",
        Error::DegenerateTriangle => "DegenerateTriangle",
        Error::NotOnDiagonal => "NotOnDiagonal",
        Error::NoClassApplicable => "NoClassApplicable",
        Error::PatternMismatch(_) => "PatternMismatch",
        Error::NoRoot { .. } => "NoRoot",
        Error::Precondition(_) => "Precondition",
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Re-ingestible scene for an angular configuration at the model origin.
fn scene_of(cfg: &AngularConfig) -> Value {
    to_value(&SceneFile {
        curvature: cfg.curvature().value(),
        angular: Some(AngularSpec {
            directions_deg: cfg.directions().degrees(),
            lengths: cfg.lengths(),
            weights: cfg.weights(),
        }),
        vertices: None,
        solver: None,
    })
}

fn angular_summary(cfg: &AngularConfig) -> Value {
    json!({
        "curvature": cfg.curvature().value(),
        "directions_deg": cfg.directions().degrees(),
        "lengths": cfg.lengths(),
        "weights": cfg.weights(),
        "basepoint": to_value(&cfg.basepoint()),
        "position": format!("{:?}", cfg.directions().position()),
    })
}

/// The angular view of the scene: given directly, or read off at the
/// forward solution of a vertex scene.
fn angular_view(scene: &QuadScene, opts: &SolverOptions, warnings: &mut Vec<String>) -> Result<AngularConfig, Failure> {
    match &scene.geometry {
        SceneGeometry::Angular(cfg) => Ok(*cfg),
        SceneGeometry::Vertices(vc) => {
            let r = solve_forward(vc, opts)?;
            if let FtStatus::AbsorbedAtVertex(v) = r.status {
                return Err(Error::Precondition(format!("the minimizer is absorbed at vertex {}", v.label())).into());
            }
            warnings.push("angular view taken at the forward solution of the vertex scene".into());
            Ok(extract_angular(vc, &r.point)?)
        }
    }
}

fn forward_value(r: &FtResult, scene_k: Curvature, weights: [f64; 4]) -> Value {
    let mut v = to_value(r);
    if let Some(d) = r.directions {
        v["directions_deg"] = to_value(&d.degrees());
        v["scene"] = to_value(&SceneFile {
            curvature: scene_k.value(),
            angular: Some(AngularSpec { directions_deg: d.degrees(), lengths: r.arc_lengths, weights }),
            vertices: None,
            solver: None,
        });
    }
    v
}

pub fn forward(scene: &QuadScene, opts: &SolverOptions) -> Result<Outcome, Failure> {
    let vc = match &scene.geometry {
        SceneGeometry::Angular(cfg) => realize_vertices(cfg)?,
        SceneGeometry::Vertices(vc) => *vc,
    };
    let r = solve_forward(&vc, opts)?;
    let mut warnings = Vec::new();
    if let FtStatus::AbsorbedAtVertex(v) = r.status {
        warnings.push(format!("the minimizer is absorbed at vertex {}", v.label()));
    }
    Ok(Outcome { results: forward_value(&r, scene.curvature(), scene.weights()), warnings, exit_code: 0 })
}

/// `--wd`: a single value, `a:b:n`, or `sweep a:b:n` (n evenly spaced values
/// from a to b inclusive).
pub fn parse_wd(spec: &str) -> Result<Vec<f64>, String> {
    let body = spec.trim();
    let body = body.strip_prefix("sweep").map(str::trim).unwrap_or(body);
    let parts: Vec<&str> = body.split(':').collect();
    let real = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("invalid number `{s}` in --wd {spec:?}"));
    match parts.as_slice() {
        [x] => Ok(vec![real(x)?]),
        [a, b, n] => {
            let (a, b) = (real(a)?, real(b)?);
            let n: usize = n.trim().parse().map_err(|_| format!("invalid count `{n}` in --wd {spec:?}"))?;
            match n {
                0 => Err(format!("--wd {spec:?} asks for zero values")),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(format!("--wd must be a value, a:b:n or \"sweep a:b:n\", got {spec:?}")),
    }
}

pub fn inverse(scene: &QuadScene, opts: &SolverOptions, budget: Option<f64>, wd: &[f64]) -> Result<Outcome, Failure> {
    let mut warnings = Vec::new();
    let cfg = angular_view(scene, opts, &mut warnings)?;
    let c = budget.unwrap_or_else(|| scene.weights().iter().sum());
    let dirs = cfg.directions();
    let rows_from = |eval: &dyn Fn(f64) -> [f64; 4], warnings: &mut Vec<String>| -> Vec<Value> {
        wd.iter()
            .map(|&x| {
                let w = eval(x);
                let positive = w.iter().all(|v| *v > 0.0);
                let mut row = json!({ "w_d": x, "weights": w, "positive": positive });
                if positive {
                    if let Ok(next) = cfg.with_weights(w) {
                        row["scene"] = scene_of(&next);
                    }
                } else {
                    warnings.push(format!("w_D = {x} lies outside the positivity interval"));
                }
                row
            })
            .collect()
    };
    let mut results = json!({ "budget": c, "configuration": angular_summary(&cfg) });
    match dirs.position() {
        QuadPosition::OnDiagonalBD | QuadPosition::OnBothDiagonals => {
            let dl = diagonal_case(dirs, c)?;
            results["kind"] = json!("diagonal");
            results["slopes"] = json!([dl.ratio_a_c * dl.x_c, dl.x_b, dl.x_c]);
            results["intercepts"] = json!([dl.ratio_a_c * dl.y_c, dl.y_b, dl.y_c]);
            results["positivity_interval"] = to_value(&dl.positivity_interval);
            results["line"] = to_value(&dl);
            results["rows"] = Value::from(rows_from(&|x| dl.weights_at(x), &mut warnings));
        }
        _ => {
            let line = plasticity_line(dirs, c)?;
            let closed = plasticity_line_closed_form(dirs, c)?;
            results["kind"] = json!("plasticity");
            results["slopes"] = to_value(&line.slopes());
            results["intercepts"] = to_value(&line.intercepts());
            results["positivity_interval"] = to_value(&line.positivity_interval);
            results["line"] = to_value(&line);
            results["closed_form"] = to_value(&closed);
            results["sign_report"] = to_value(&sign_report(&line));
            results["rows"] = Value::from(rows_from(&|x| line.weights_at(x), &mut warnings));
        }
    }
    Ok(Outcome { results, warnings, exit_code: 0 })
}

#[derive(Clone, Copy)]
pub enum ClassArg {
    A,
    B,
    Auto,
    Direct,
}

pub fn symmetrize_cmd(
    scene: &QuadScene,
    opts: &SolverOptions,
    class: ClassArg,
    par_tol: Option<f64>,
    out_svg: Option<&PathBuf>,
) -> Result<Outcome, Failure> {
    let mut warnings = Vec::new();
    let cfg = angular_view(scene, opts, &mut warnings)?;
    let report = match (class, par_tol) {
        (ClassArg::Direct, Some(tol)) => {
            // The direct figure is judged with the caller's tolerance too.
            let mut r = direct_parallelogram_check(&cfg)?;
            r.tolerance = tol;
            r.is_parallelogram = r.opposite_side_mismatch.iter().all(|m| *m <= tol) && r.diagonal_midpoint_gap <= tol;
            r
        }
        (ClassArg::Direct, None) => direct_parallelogram_check(&cfg)?,
        (c, tol) => {
            let choice = match c {
                ClassArg::A => ClassChoice::A,
                ClassArg::B => ClassChoice::B,
                _ => ClassChoice::Auto,
            };
            match tol {
                Some(t) => symmetrize_with_tolerance(&cfg, choice, t)?,
                None => symmetrize(&cfg, choice)?,
            }
        }
    };
    if !report.is_parallelogram {
        warnings.push(format!(
            "not a parallelogram within tolerance {}: side mismatch {:?}, midpoint gap {}",
            report.tolerance, report.opposite_side_mismatch, report.diagonal_midpoint_gap
        ));
    }
    let mut results = json!({ "configuration": angular_summary(&cfg), "report": to_value(&report) });
    if let Some(path) = out_svg {
        let figure = svg::symmetrization_figure(&cfg, &report);
        if let Err(e) = std::fs::write(path, figure) {
            return Err(Failure::io(format!("cannot write SVG to {}: {e}", path.display()), results, warnings));
        }
        results["svg"] = json!(path.display().to_string());
    }
    Ok(Outcome { results, warnings, exit_code: 0 })
}

pub fn glue(
    scene: &QuadScene,
    opts: &SolverOptions,
    case: GlueCase,
    k1: f64,
    k2: f64,
    budget: Option<f64>,
) -> Result<Outcome, Failure> {
    let mut warnings = Vec::new();
    let cfg = angular_view(scene, opts, &mut warnings)?;
    let (k1, k2) = (Curvature::new(k1)?, Curvature::new(k2)?);
    let out = glue_quad(&cfg, case, k1, k2)?;
    let sp = out.spec;
    if sp.raw_defect.abs() > DEFECT_TOL {
        warnings.push(format!(
            "raw angle-sum defect {} normalized by moving K2 towards the scene curvature (s = {}); this is one of several possible normalizations",
            sp.raw_defect, sp.s
        ));
    }
    let c = budget.unwrap_or_else(|| scene.weights().iter().sum());
    let mut results = json!({
        "budget": c,
        "configuration": angular_summary(&cfg),
        "spec": to_value(&sp),
        "glued_gaps_deg": sp.glued_gaps.map(f64::to_degrees),
        "perturbed": angular_summary(&out.perturbed),
        "perturbed_scene": scene_of(&out.perturbed),
    });
    if out.perturbed.directions().position() == QuadPosition::Interior
        && cfg.directions().position() == QuadPosition::Interior
    {
        results["comparative"] = to_value(&comparative_plasticity(&cfg, &out.perturbed, c)?);
    } else {
        warnings.push("comparative plasticity needs both configurations interior; omitted".into());
    }
    Ok(Outcome { results, warnings, exit_code: 0 })
}

pub fn check(file: &SceneFile, opts: &SolverOptions) -> Result<Outcome, Failure> {
    let mut warnings = Vec::new();
    let k = Curvature::new(file.curvature)?;
    // The perimeter is judged before the configuration is built, so that
    // a violation is reported as a failed check with its bound.
    if let Some(a) = &file.angular {
        let dirs = Directions::from_degrees(a.directions_deg)?;
        let perimeter = angular_perimeter_check(k, &dirs, &a.lengths);
        if !perimeter.ok {
            let results = json!({
                "perimeter": to_value(&perimeter),
                "checks": { "perimeter": false },
            });
            warnings.push(format!("perimeter {} is not below the bound {}", perimeter.perimeter, perimeter.bound));
            return Ok(Outcome { results, warnings, exit_code: 4 });
        }
    }
    let scene = file.build().map_err(|e| Failure {
        exit_code: 1,
        kind: "Scene".into(),
        message: e.to_string(),
        results: Value::Null,
        warnings: Vec::new(),
    })?;
    let perimeter = match &scene.geometry {
        SceneGeometry::Angular(cfg) => angular_perimeter_check(k, cfg.directions(), &cfg.lengths()),
        SceneGeometry::Vertices(vc) => vertex_perimeter_check(vc)?,
    };
    let cfg = angular_view(&scene, opts, &mut warnings)?;
    let position = convexity_check(&cfg);
    let residual = stationarity_residual(&cfg);
    let w = cfg.weights();
    let total: f64 = w.iter().sum();
    let exact = 1e-9 * w.iter().copied().fold(0.0, f64::max);
    let residual_ok = residual.norm <= RESIDUAL_FAIL * total;
    if residual_ok && residual.norm > exact {
        warnings.push(format!("weights balance only approximately (residual {}); rounded weights?", residual.norm));
    }
    let convex_ok = position != QuadPosition::NotInterior;
    let checks = json!({ "convexity": convex_ok, "perimeter": perimeter.ok, "residual": residual_ok });
    let ok = convex_ok && perimeter.ok && residual_ok;
    let results = json!({
        "configuration": angular_summary(&cfg),
        "position": format!("{position:?}"),
        "perimeter": to_value(&perimeter),
        "residual": to_value(&residual),
        "residual_thresholds": { "exact": exact, "fail": RESIDUAL_FAIL * total },
        "checks": checks,
        "passed": ok,
    });
    Ok(Outcome { results, warnings, exit_code: if ok { 0 } else { 4 } })
}
