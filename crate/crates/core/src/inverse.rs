//! Inverse problem: weights that make a given point the minimizer.
//!
//! With the directions fixed, balance `Σ w_R u_R = 0` plus the budget
//! `Σ w_R = c` leaves one free weight. Taking `w_D` as the parameter gives
//! the plasticity line `w_R = a_R w_D + b_R` for `R ∈ {A, B, C}`. It is
//! computed twice: by a direct 3×3 solve and by a closed form assembled from
//! the three-point ratios at the sub-triangles.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::config::{Directions, QuadPosition, Vertex};
use crate::error::{Error, Result};

/// Threshold on the row-normalized determinant of the balance system.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Open interval `(lower, upper)`; empty when `lower >= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        // NaN bounds count as empty.
        self.lower.partial_cmp(&self.upper) != Some(std::cmp::Ordering::Less)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    /// Midpoint, or `None` for an empty or unbounded interval.
    pub fn midpoint(&self) -> Option<f64> {
        (!self.is_empty() && self.upper.is_finite()).then_some(0.5 * (self.lower + self.upper))
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lower: self.lower.max(other.lower), upper: self.upper.min(other.upper) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlasticityLine {
    /// `(a_R, b_R)` for `R = A, B, C`.
    pub coefficients: [(f64, f64); 3],
    pub budget: f64,
    pub positivity_interval: Interval,
}

impl PlasticityLine {
    fn from_parts(a: [f64; 3], b: [f64; 3], budget: f64) -> Self {
        let coefficients = [(a[0], b[0]), (a[1], b[1]), (a[2], b[2])];
        let positivity_interval = interval_of(&coefficients);
        PlasticityLine { coefficients, budget, positivity_interval }
    }

    pub fn slopes(&self) -> [f64; 3] {
        self.coefficients.map(|(a, _)| a)
    }

    pub fn intercepts(&self) -> [f64; 3] {
        self.coefficients.map(|(_, b)| b)
    }

    /// The four weights `(w_A, w_B, w_C, w_D)` at the given `w_D`.
    pub fn weights_at(&self, wd: f64) -> [f64; 4] {
        let [(aa, ba), (ab, bb), (ac, bc)] = self.coefficients;
        [aa * wd + ba, ab * wd + bb, ac * wd + bc, wd]
    }
}

fn interval_of(coefficients: &[(f64, f64); 3]) -> Interval {
    let mut iv = Interval { lower: 0.0, upper: f64::INFINITY };
    for &(a, b) in coefficients {
        if a > 0.0 {
            iv.lower = iv.lower.max(-b / a);
        } else if a < 0.0 {
            iv.upper = iv.upper.min(-b / a);
        } else if b <= 0.0 {
            return Interval { lower: 0.0, upper: 0.0 };
        }
    }
    iv
}

pub fn positivity_interval(line: &PlasticityLine) -> Interval {
    interval_of(&line.coefficients)
}

fn balance_matrix(dirs: &Directions) -> Result<Matrix3<f64>> {
    let [ua, ub, uc] = [Vertex::A, Vertex::B, Vertex::C].map(|v| dirs.unit(v));
    let m = Matrix3::new(ua[0], ub[0], uc[0], ua[1], ub[1], uc[1], 1.0, 1.0, 1.0);
    let mut scaled = m;
    for mut row in scaled.row_iter_mut() {
        let n = row.norm();
        row /= n;
    }
    let det = scaled.determinant();
    if det.abs() < SINGULAR_TOL {
        return Err(Error::SingularSystem { determinant: det });
    }
    Ok(m)
}

fn solve(m: &Matrix3<f64>, rhs: Vector3<f64>) -> Result<[f64; 3]> {
    let x = m.lu().solve(&rhs).ok_or(Error::SingularSystem { determinant: 0.0 })?;
    Ok([x[0], x[1], x[2]])
}

fn check_budget(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("budget must be positive, got {c}")))
    }
}

fn check_surrounds(dirs: &Directions) -> Result<()> {
    if dirs.position() == QuadPosition::NotInterior {
        Err(Error::Precondition("directions do not surround the base point".into()))
    } else {
        Ok(())
    }
}

/// Solves the balance system for `(w_A, w_B, w_C)` at the given `w_D`.
/// The result is not checked for positivity.
pub fn balance_weights(dirs: &Directions, c: f64, wd: f64) -> Result<[f64; 4]> {
    check_budget(c)?;
    check_surrounds(dirs)?;
    if !(wd.is_finite() && wd >= 0.0) {
        return Err(Error::Precondition(format!("w_D must be non-negative, got {wd}")));
    }
    let m = balance_matrix(dirs)?;
    let ud = dirs.unit(Vertex::D);
    let [wa, wb, wc] = solve(&m, Vector3::new(-wd * ud[0], -wd * ud[1], c - wd))?;
    Ok([wa, wb, wc, wd])
}

/// Plasticity line by direct solves for the slope and intercept vectors.
pub fn plasticity_line(dirs: &Directions, c: f64) -> Result<PlasticityLine> {
    check_budget(c)?;
    check_surrounds(dirs)?;
    let m = balance_matrix(dirs)?;
    let ud = dirs.unit(Vertex::D);
    let a = solve(&m, Vector3::new(-ud[0], -ud[1], -1.0))?;
    let b = solve(&m, Vector3::new(0.0, 0.0, c))?;
    Ok(PlasticityLine::from_parts(a, b, c))
}

fn nonzero(x: f64) -> Result<f64> {
    if x.abs() < SINGULAR_TOL {
        Err(Error::SingularSystem { determinant: x })
    } else {
        Ok(x)
    }
}

/// Three-point ratios `(w_S/w_R, w_T/w_R)` without any sign check.
fn signed_ratios(r: f64, s: f64, t: f64) -> Result<(f64, f64)> {
    let st = nonzero((t - s).sin())?;
    Ok((-(t - r).sin() / st, (s - r).sin() / st))
}

/// Weight ratios `(w_S/w_R, w_T/w_R)` balancing three unit directions.
/// The directions must surround the point: every gap below π.
pub fn triangle_inverse_ratios(angles: [f64; 3]) -> Result<(f64, f64)> {
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(Error::DegenerateTriangle);
    }
    let tau = std::f64::consts::TAU;
    let mut rel = [0.0, (angles[1] - angles[0]).rem_euclid(tau), (angles[2] - angles[0]).rem_euclid(tau)];
    rel.sort_by(f64::total_cmp);
    let gaps = [rel[1] - rel[0], rel[2] - rel[1], tau - rel[2]];
    let band = crate::config::BOUNDARY_TOL;
    if gaps.iter().any(|g| *g <= band || *g >= std::f64::consts::PI - band) {
        return Err(Error::DegenerateTriangle);
    }
    signed_ratios(angles[0], angles[1], angles[2]).map_err(|_| Error::DegenerateTriangle)
}

/// Plasticity line from the closed-form ratio expressions.
///
/// With `s(X, Y) = sin(θ_Y − θ_X)`:
/// the triangle ratios `(w_B/w_A)_{ABC} = −s(C,A)/s(C,B)` and
/// `(w_C/w_A)_{ABC} = −s(B,A)/s(B,C)` fix the intercepts, and the
/// products `(w_A/w_D)_{ACD}·(w_B/w_A)_{ABC} = s(C,D)/s(C,B)` and
/// `(w_A/w_D)_{ABD}·(w_C/w_A)_{ABC} = s(B,D)/s(B,C)` enter the slopes. Using
/// the products instead of the factors keeps the form finite when the point
/// lies on the diagonal AC.
pub fn plasticity_line_closed_form(dirs: &Directions, c: f64) -> Result<PlasticityLine> {
    check_budget(c)?;
    check_surrounds(dirs)?;
    let s = |x: Vertex, y: Vertex| dirs.sin_between(x, y);
    use Vertex::{A, B, C, D};
    let scb = nonzero(s(C, B))?;
    let sbc = nonzero(s(B, C))?;
    let r_ba = -s(C, A) / scb;
    let r_ca = -s(B, A) / sbc;
    let p_cd = s(C, D) / scb;
    let p_bd = s(B, D) / sbc;
    let n = nonzero(1.0 + r_ba + r_ca)?;
    let a_a = (p_cd + p_bd - 1.0) / n;
    let b_a = c / n;
    let a = [a_a, a_a * r_ba - p_cd, a_a * r_ca - p_bd];
    let b = [b_a, r_ba * b_a, r_ca * b_a];
    Ok(PlasticityLine::from_parts(a, b, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignReport {
    pub principle_holds: bool,
    pub a_a: f64,
    pub a_b: f64,
    pub a_c: f64,
}

/// Checks that raising `w_D` lowers both neighbours and raises the opposite weight.
pub fn sign_report(line: &PlasticityLine) -> SignReport {
    let [a_a, a_b, a_c] = line.slopes();
    SignReport { principle_holds: a_a < 0.0 && a_c < 0.0 && a_b > 0.0, a_a, a_b, a_c }
}

/// Weights along the diagonal BD: `w_C = x_C w_D + y_C`, `w_B = x_B w_D + y_B`,
/// `w_A = ratio_a_c · w_C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalLine {
    pub x_c: f64,
    pub y_c: f64,
    pub x_b: f64,
    pub y_b: f64,
    pub determinant: f64,
    pub ratio_a_c: f64,
    pub budget: f64,
    /// Whether the point lies between B and the crossing with AC.
    pub nearer_b: bool,
    pub both_diagonals: bool,
    pub positivity_interval: Interval,
}

impl DiagonalLine {
    pub fn weights_at(&self, wd: f64) -> [f64; 4] {
        let wc = self.x_c * wd + self.y_c;
        [self.ratio_a_c * wc, self.x_b * wd + self.y_b, wc, wd]
    }
}

/// Weights when the point lies on the diagonal BD.
///
/// Balance along the diagonal's normal ties `w_A` to `w_C`; the two
/// remaining equations (balance along the diagonal and the budget) are solved
/// for `w_B` and `w_C` by Cramer's rule. On both diagonals the exact solution
/// `w_A = w_C`, `w_B = w_D`, `2 w_A + 2 w_D = c` is used.
pub fn diagonal_case(dirs: &Directions, c: f64) -> Result<DiagonalLine> {
    check_budget(c)?;
    let position = dirs.position();
    let both = match position {
        QuadPosition::OnDiagonalBD => false,
        QuadPosition::OnBothDiagonals => true,
        _ => return Err(Error::NotOnDiagonal),
    };
    let s = |x: Vertex, y: Vertex| dirs.sin_between(x, y);
    use Vertex::{A, B, C, D};
    let r = s(B, C) / s(B, A);
    let det = (1.0 - r) * s(C, B) + s(C, A) * r;
    let nearer_b = dirs.get(C) > std::f64::consts::PI;
    let (x_c, y_c, x_b, y_b, ratio) = if both {
        (-1.0, 0.5 * c, 1.0, 0.0, 1.0)
    } else {
        let det = nonzero(det)?;
        (
            (-s(C, B) + s(C, D)) / det,
            c * s(C, B) / det,
            (-s(C, D) * (1.0 - r) - s(C, A) * r) / det,
            c * s(C, A) * r / det,
            -r,
        )
    };
    // w_A and w_C share the sign of the C line, so positivity is the B and C lines.
    let positivity_interval = interval_of(&[(x_c, y_c), (x_b, y_b), (x_c, y_c)]);
    Ok(DiagonalLine {
        x_c,
        y_c,
        x_b,
        y_b,
        determinant: det,
        ratio_a_c: ratio,
        budget: c,
        nearer_b,
        both_diagonals: both,
        positivity_interval,
    })
}
