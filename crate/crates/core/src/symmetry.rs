//! Parallelograms from the weighted tangent image.
//!
//! Each vertex `R` is replaced by `R′ = w_R · u_R` in the tangent plane at the
//! base point. Reflecting one opposite pair through the origin gives a
//! quadrilateral whose diagonals share a midpoint exactly when the weights
//! balance, i.e. a parallelogram.

use serde::Serialize;

use crate::config::{AngularConfig, QuadPosition, Vertex};
use crate::error::{Error, Result};

/// Tolerance for the equal-opposite weight pattern.
pub const PATTERN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentImage {
    pub points: [[f64; 2]; 4],
    pub weights: [f64; 4],
}

pub fn tangent_image(cfg: &AngularConfig) -> TangentImage {
    let w = cfg.weights();
    let mut points = [[0.0; 2]; 4];
    for v in Vertex::ALL {
        let t = cfg.directions().get(v) + cfg.orientation();
        points[v.index()] = [w[v.index()] * t.cos(), w[v.index()] * t.sin()];
    }
    TangentImage { points, weights: w }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymmetryClass {
    /// `A′` and `C′` reflected.
    A,
    /// `B′` and `D′` reflected.
    B,
    /// No reflection.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassChoice {
    A,
    B,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelogramReport {
    pub class: SymmetryClass,
    pub image: TangentImage,
    /// The figure's corners in order A, B, C, D (reflected where applicable).
    pub reflected_points: [[f64; 2]; 4],
    /// Sides AB, BC, CD, DA of the figure.
    pub side_lengths: [f64; 4],
    /// `| |AB| − |CD| |` and `| |BC| − |DA| |`.
    pub opposite_side_mismatch: [f64; 2],
    pub diagonal_lengths: [f64; 2],
    pub diagonal_midpoint_gap: f64,
    pub tolerance: f64,
    pub is_parallelogram: bool,
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn report(class: SymmetryClass, image: TangentImage, tol: f64) -> ParallelogramReport {
    let flip = |p: [f64; 2]| [-p[0], -p[1]];
    let mut pts = image.points;
    match class {
        SymmetryClass::A => {
            pts[0] = flip(pts[0]);
            pts[2] = flip(pts[2]);
        }
        SymmetryClass::B => {
            pts[1] = flip(pts[1]);
            pts[3] = flip(pts[3]);
        }
        SymmetryClass::Direct => {}
    }
    let sides = [dist(pts[0], pts[1]), dist(pts[1], pts[2]), dist(pts[2], pts[3]), dist(pts[3], pts[0])];
    let mismatch = [(sides[0] - sides[2]).abs(), (sides[1] - sides[3]).abs()];
    let gap =
        0.5 * dist([pts[0][0] + pts[2][0], pts[0][1] + pts[2][1]], [pts[1][0] + pts[3][0], pts[1][1] + pts[3][1]]);
    ParallelogramReport {
        class,
        image,
        reflected_points: pts,
        side_lengths: sides,
        opposite_side_mismatch: mismatch,
        diagonal_lengths: [dist(pts[0], pts[2]), dist(pts[1], pts[3])],
        diagonal_midpoint_gap: gap,
        tolerance: tol,
        is_parallelogram: mismatch[0] <= tol && mismatch[1] <= tol && gap <= tol,
    }
}

/// Default tolerance: `1e-9 · max w_R`.
pub fn default_tolerance(cfg: &AngularConfig) -> f64 {
    1e-9 * cfg.weights().iter().cloned().fold(0.0, f64::max)
}

/// The class selected by the weight orderings, if either holds:
/// `w_B > w_A > w_D > w_C` gives A, `w_A > w_B > w_C > w_D` gives B.
pub fn class_by_ordering(w: &[f64; 4]) -> Option<SymmetryClass> {
    let [a, b, c, d] = *w;
    if b > a && a > d && d > c {
        Some(SymmetryClass::A)
    } else if a > b && b > c && c > d {
        Some(SymmetryClass::B)
    } else {
        None
    }
}

fn equal_opposites(w: &[f64; 4]) -> bool {
    (w[0] - w[2]).abs() <= PATTERN_TOL && (w[1] - w[3]).abs() <= PATTERN_TOL
}

pub fn symmetrize(cfg: &AngularConfig, choice: ClassChoice) -> Result<ParallelogramReport> {
    symmetrize_with_tolerance(cfg, choice, default_tolerance(cfg))
}

/// As [`symmetrize`] with an explicit acceptance tolerance, for weights
/// known only to a few digits.
pub fn symmetrize_with_tolerance(cfg: &AngularConfig, choice: ClassChoice, tol: f64) -> Result<ParallelogramReport> {
    let image = tangent_image(cfg);
    let class = match choice {
        ClassChoice::A => SymmetryClass::A,
        ClassChoice::B => SymmetryClass::B,
        ClassChoice::Auto => match class_by_ordering(&cfg.weights()) {
            Some(c) => c,
            None if equal_opposites(&cfg.weights()) && cfg.directions().position() == QuadPosition::OnBothDiagonals => {
                SymmetryClass::Direct
            }
            None => return Err(Error::NoClassApplicable),
        },
    };
    Ok(report(class, image, tol))
}

/// The unreflected image when `w_A = w_C`, `w_B = w_D` and the point lies on
/// both diagonals.
pub fn direct_parallelogram_check(cfg: &AngularConfig) -> Result<ParallelogramReport> {
    let w = cfg.weights();
    if !equal_opposites(&w) {
        return Err(Error::PatternMismatch(format!("weights {w:?} do not satisfy w_A = w_C and w_B = w_D")));
    }
    if cfg.directions().position() != QuadPosition::OnBothDiagonals {
        return Err(Error::PatternMismatch("the point is not on both diagonals".into()));
    }
    Ok(report(SymmetryClass::Direct, tangent_image(cfg), default_tolerance(cfg)))
}
