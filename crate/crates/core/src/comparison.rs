//! Comparison triangles and glued quadrilaterals.
//!
//! The four sub-triangles `P R S` of a configuration are carried to other
//! curvatures keeping their side lengths, which changes their angles at the
//! base point by `ε_i`. Gluing the moved triangles back around the point
//! gives a new set of directions, and with it a new plasticity line.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::config::{AngularConfig, Directions, QuadPosition, Vertex};
use crate::error::{Error, Result};
use crate::inverse::{plasticity_line, sign_report, PlasticityLine, SignReport};
use crate::kplane::{self, Curvature};

/// Target for the normalized angle-sum defect.
pub const DEFECT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonAngle {
    pub third_side: f64,
    pub angle: f64,
    /// `γ − angle`: positive when the target is less curved than the source.
    pub epsilon: f64,
}

/// The angle, on `target`, of the triangle with sides `a`, `b` and the third
/// side they span at angle `gamma` on `source`.
pub fn comparison_angle(source: Curvature, target: Curvature, a: f64, b: f64, gamma: f64) -> Result<ComparisonAngle> {
    let third_side = kplane::loc_side_from_sides_angle(source, a, b, gamma)?;
    if source == target {
        return Ok(ComparisonAngle { third_side, angle: gamma, epsilon: 0.0 });
    }
    let angle = kplane::loc_angle_from_sides(target, a, b, third_side)?;
    Ok(ComparisonAngle { third_side, angle, epsilon: gamma - angle })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GlueCase {
    /// `(A,D)`, `(D,C)` to `K₁`; `(C,B)`, `(B,A)` to `K₂`.
    MPrime,
    /// `(A,D)`, `(D,C)` kept; `(C,B)` to `K₁`; `(B,A)` to `K₂`.
    MDoublePrime,
}

/// Sub-triangle order used throughout: the gaps at the base point between
/// `(A,D)`, `(D,C)`, `(C,B)` and `(B,A)`.
pub const SUBTRIANGLES: [(Vertex, Vertex); 4] =
    [(Vertex::A, Vertex::D), (Vertex::D, Vertex::C), (Vertex::C, Vertex::B), (Vertex::B, Vertex::A)];

fn source_gaps(dirs: &Directions) -> [f64; 4] {
    let [ab, bc, cd, da] = dirs.gaps();
    [da, cd, bc, ab]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlueSpec {
    pub case: GlueCase,
    pub k_source: Curvature,
    pub k1: Curvature,
    pub k2: Curvature,
    /// `k2` after interpolation towards `k_source`.
    pub k2_effective: Curvature,
    /// Interpolation parameter: `k2_effective = k_source + s (k2 − k_source)`.
    pub s: f64,
    /// Angular shifts with `k2` unmodified, as magnitudes: the glued gap is
    /// the source gap minus `ε` on a `K₁` triangle and plus `ε` on a `K₂` one.
    pub raw_epsilon: [f64; 4],
    pub epsilon: [f64; 4],
    pub source_gaps: [f64; 4],
    pub glued_gaps: [f64; 4],
    /// Glued angle sum minus 2π with `k2` unmodified.
    pub raw_defect: f64,
    pub angle_sum_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlueOutcome {
    pub spec: GlueSpec,
    pub perturbed: AngularConfig,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Keep,
    Lower,
    Upper,
}

fn targets(case: GlueCase) -> [Target; 4] {
    match case {
        GlueCase::MPrime => [Target::Lower, Target::Lower, Target::Upper, Target::Upper],
        GlueCase::MDoublePrime => [Target::Keep, Target::Keep, Target::Lower, Target::Upper],
    }
}

#[derive(Clone, Copy)]
struct Glued {
    epsilon: [f64; 4],
    gaps: [f64; 4],
    defect: f64,
}

fn glue_at(cfg: &AngularConfig, case: GlueCase, k1: Curvature, k2: Curvature) -> Result<Glued> {
    let k = cfg.curvature();
    let l = cfg.lengths();
    let src = source_gaps(cfg.directions());
    let mut epsilon = [0.0; 4];
    let mut gaps = src;
    for (i, ((r, s), t)) in SUBTRIANGLES.iter().zip(targets(case)).enumerate() {
        let (a, b) = (l[r.index()], l[s.index()]);
        match t {
            Target::Keep => {}
            Target::Lower => {
                let ca = comparison_angle(k, k1, a, b, src[i])?;
                epsilon[i] = ca.epsilon;
                gaps[i] = src[i] - ca.epsilon;
            }
            Target::Upper => {
                let ca = comparison_angle(k, k2, a, b, src[i])?;
                epsilon[i] = -ca.epsilon;
                gaps[i] = src[i] - ca.epsilon;
            }
        }
    }
    let defect = gaps.iter().sum::<f64>() - TAU;
    Ok(Glued { epsilon, gaps, defect })
}

fn interpolate(k: Curvature, k2: Curvature, s: f64) -> Result<Curvature> {
    if s == 1.0 {
        return Ok(k2);
    }
    if s == 0.0 {
        return Ok(k);
    }
    Curvature::new(k.value() + s * (k2.value() - k.value()))
}

/// Rebuilds directions from the glued gaps. For M″ the directions of C and D
/// are kept as they are, so the two untouched gaps stay bit-identical.
fn glued_directions(cfg: &AngularConfig, case: GlueCase, gaps: &[f64; 4]) -> Result<Directions> {
    let [_, dc, cb, ba] = *gaps;
    let src = cfg.directions().angles();
    let angles = match case {
        GlueCase::MPrime => {
            let b = ba;
            let c = b + cb;
            [0.0, b, c, c + dc]
        }
        GlueCase::MDoublePrime => [0.0, src[2] - cb, src[2], src[3]],
    };
    Directions::new(angles)
}

/// Glues the moved sub-triangles back around the base point. The glued
/// angle sum generally misses 2π; `k2` is interpolated towards the source
/// curvature by bisection on `s ∈ [0, 1]` until it closes.
pub fn glue_quad(cfg: &AngularConfig, case: GlueCase, k1: Curvature, k2: Curvature) -> Result<GlueOutcome> {
    let k = cfg.curvature();
    if !(k1 <= k && k <= k2) {
        return Err(Error::Precondition(format!(
            "curvature bounds must satisfy k1 <= k <= k2, got {} <= {} <= {}",
            k1.value(),
            k.value(),
            k2.value()
        )));
    }
    if cfg.directions().position() != QuadPosition::Interior {
        return Err(Error::Precondition("gluing needs an interior configuration".into()));
    }
    let raw = glue_at(cfg, case, k1, k2)?;
    let at = |s: f64| -> Result<Glued> { glue_at(cfg, case, k1, interpolate(k, k2, s)?) };

    let (s, fit) = if raw.defect.abs() < DEFECT_TOL {
        (1.0, raw)
    } else {
        let lo = at(0.0)?;
        if lo.defect.abs() < DEFECT_TOL {
            (0.0, lo)
        } else if lo.defect.signum() == raw.defect.signum() {
            return Err(Error::NoRoot { defect_lo: lo.defect, defect_hi: raw.defect });
        } else {
            let (mut a, mut b) = (0.0f64, 1.0f64);
            let (mut fa, mut best) = (lo.defect, raw);
            let mut best_s = 1.0;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let g = at(m)?;
                let fm = g.defect;
                if fm.abs() < best.defect.abs() {
                    best_s = m;
                    best = g;
                    if best.defect.abs() < 1e-14 {
                        break;
                    }
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            (best_s, best)
        }
    };

    let directions = glued_directions(cfg, case, &fit.gaps)?;
    let perturbed = cfg.with_directions(directions);
    let glued_gaps = source_gaps(&directions);
    let spec = GlueSpec {
        case,
        k_source: k,
        k1,
        k2,
        k2_effective: interpolate(k, k2, s)?,
        s,
        raw_epsilon: raw.epsilon,
        epsilon: fit.epsilon,
        source_gaps: source_gaps(cfg.directions()),
        glued_gaps,
        raw_defect: raw.defect,
        angle_sum_defect: fit.defect,
    };
    Ok(GlueOutcome { spec, perturbed })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparativePlasticityReport {
    pub original_line: PlasticityLine,
    pub glued_line: PlasticityLine,
    /// `a_R(glued) − a_R(original)` for `R = A, B, C`.
    pub deltas: [f64; 3],
    pub delta_sum: f64,
    /// The common `w_D` at which the ratio table is evaluated: the midpoint
    /// of both positivity intervals.
    pub matched_wd: Option<f64>,
    /// `(w_R/w_S)_glued / (w_R/w_S)_original` at `matched_wd`.
    pub ratio_table: Option<[[f64; 4]; 4]>,
    pub glued_signs: SignReport,
}

pub fn comparative_plasticity(
    original: &AngularConfig,
    perturbed: &AngularConfig,
    c: f64,
) -> Result<ComparativePlasticityReport> {
    for cfg in [original, perturbed] {
        if cfg.directions().position() != QuadPosition::Interior {
            return Err(Error::Precondition("comparative plasticity needs interior configurations".into()));
        }
    }
    let ol = plasticity_line(original.directions(), c)?;
    let gl = plasticity_line(perturbed.directions(), c)?;
    let (ao, ag) = (ol.slopes(), gl.slopes());
    let deltas = [ag[0] - ao[0], ag[1] - ao[1], ag[2] - ao[2]];
    let delta_sum = deltas.iter().sum();
    let matched_wd = ol.positivity_interval.intersect(&gl.positivity_interval).midpoint();
    let ratio_table = matched_wd.map(|wd| {
        let (wo, wg) = (ol.weights_at(wd), gl.weights_at(wd));
        let mut t = [[0.0; 4]; 4];
        for r in 0..4 {
            for s in 0..4 {
                t[r][s] = (wg[r] / wg[s]) / (wo[r] / wo[s]);
            }
        }
        t
    });
    Ok(ComparativePlasticityReport {
        original_line: ol,
        glued_line: gl,
        deltas,
        delta_sum,
        matched_wd,
        ratio_table,
        glued_signs: sign_report(&gl),
    })
}
