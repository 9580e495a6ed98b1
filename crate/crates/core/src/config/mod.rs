//! The quadrilateral as seen from its weighted Fermat-Torricelli point.
//!
//! An [`AngularConfig`] holds the four arc directions, arc lengths and weights
//! at the base point; a [`VertexConfig`] holds the four vertices themselves.
//! [`realize_vertices`] and [`extract_angular`] convert between the two.

mod scene;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kplane::{self, Curvature, Model, SurfacePoint, TangentVector};

pub use scene::{AngularSpec, QuadScene, SceneError, SceneFile, SceneGeometry, SolverSpec, VertexSpec};

/// Band around π within which a point is taken to lie on a diagonal.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    A,
    B,
    C,
    D,
}

impl Vertex {
    pub const ALL: [Vertex; 4] = [Vertex::A, Vertex::B, Vertex::C, Vertex::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Vertex::A => "A",
            Vertex::B => "B",
            Vertex::C => "C",
            Vertex::D => "D",
        }
    }
}

/// Where the base point sits relative to the quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadPosition {
    Interior,
    OnDiagonalBD,
    OnBothDiagonals,
    NotInterior,
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_signed(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

fn wrap_positive(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Arc directions at the base point, rotated so that `θ_A = 0` and reduced
/// into `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Directions([f64; 4]);

impl Directions {
    pub fn new(raw: [f64; 4]) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidScene(format!("non-finite direction in {raw:?}")));
        }
        let a = raw[0];
        Ok(Directions([0.0, wrap_positive(raw[1] - a), wrap_positive(raw[2] - a), wrap_positive(raw[3] - a)]))
    }

    pub fn from_degrees(deg: [f64; 4]) -> Result<Self> {
        Directions::new(deg.map(f64::to_radians))
    }

    pub fn angles(&self) -> [f64; 4] {
        self.0
    }

    pub fn degrees(&self) -> [f64; 4] {
        self.0.map(f64::to_degrees)
    }

    pub fn get(&self, v: Vertex) -> f64 {
        self.0[v.index()]
    }

    /// Counterclockwise gaps `∠AB, ∠BC, ∠CD, ∠DA`. They always sum to 2π.
    pub fn gaps(&self) -> [f64; 4] {
        let [_, b, c, d] = self.0;
        [b, c - b, d - c, TAU - d]
    }

    /// Signed angle `∠(from) P (to)` in `(-π, π]`, counterclockwise positive.
    pub fn signed_angle(&self, from: Vertex, to: Vertex) -> f64 {
        wrap_signed(self.get(to) - self.get(from))
    }

    /// `sin ∠(from) P (to)` under the counterclockwise orientation.
    pub fn sin_between(&self, from: Vertex, to: Vertex) -> f64 {
        (self.get(to) - self.get(from)).sin()
    }

    pub fn unit(&self, v: Vertex) -> [f64; 2] {
        let t = self.get(v);
        [t.cos(), t.sin()]
    }

    pub fn on_diagonal_bd(&self) -> bool {
        ((self.get(Vertex::D) - self.get(Vertex::B)) - PI).abs() <= BOUNDARY_TOL
    }

    pub fn on_diagonal_ac(&self) -> bool {
        (self.get(Vertex::C) - PI).abs() <= BOUNDARY_TOL
    }

    /// Diagonal cases take precedence over the generic interior case, since
    /// a point on a diagonal also has all four gaps below π.
    pub fn position(&self) -> QuadPosition {
        let gaps = self.gaps();
        if gaps.iter().any(|g| *g <= BOUNDARY_TOL) {
            return QuadPosition::NotInterior;
        }
        match (self.on_diagonal_bd(), self.on_diagonal_ac()) {
            (true, true) => QuadPosition::OnBothDiagonals,
            (true, false) => QuadPosition::OnDiagonalBD,
            _ if gaps.iter().all(|g| *g < PI - BOUNDARY_TOL) => QuadPosition::Interior,
            _ => QuadPosition::NotInterior,
        }
    }
}

/// Perimeter diagnostics for a curved configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerimeterCheck {
    pub perimeter: f64,
    /// The triangle-inequality overestimate `2 Σ l_R`.
    pub estimate: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Perimeter of the quadrilateral spanned by the arcs, from the law of
/// cosines on each sub-triangle at the base point, against `2π/√k`. Arcs
/// reaching `π/√k` fail outright.
pub fn angular_perimeter_check(k: Curvature, directions: &Directions, lengths: &[f64; 4]) -> PerimeterCheck {
    let estimate = 2.0 * lengths.iter().sum::<f64>();
    let bound = k.perimeter_bound();
    if !lengths.iter().all(|l| *l < k.max_length()) {
        return PerimeterCheck { perimeter: f64::INFINITY, estimate, bound, ok: false };
    }
    let mut perimeter = 0.0;
    for (i, gap) in directions.gaps().into_iter().enumerate() {
        let opening = gap.min(TAU - gap).max(0.0);
        match kplane::loc_side_from_sides_angle(k, lengths[i], lengths[(i + 1) % 4], opening) {
            Ok(side) => perimeter += side,
            Err(_) => return PerimeterCheck { perimeter: f64::INFINITY, estimate, bound, ok: false },
        }
    }
    PerimeterCheck { perimeter, estimate, bound, ok: perimeter < bound }
}

/// Perimeter of the vertex polygon `ABCD`, compared with `2π/√k`.
pub fn vertex_perimeter_check(vc: &VertexConfig) -> Result<PerimeterCheck> {
    let v = vc.vertices();
    let mut perimeter = 0.0;
    for i in 0..4 {
        perimeter += kplane::distance(vc.curvature(), &v[i], &v[(i + 1) % 4])?;
    }
    let bound = vc.curvature().perimeter_bound();
    Ok(PerimeterCheck { perimeter, estimate: perimeter, bound, ok: perimeter < bound })
}

fn check_weights(weights: &[f64; 4]) -> Result<()> {
    if weights.iter().all(|w| w.is_finite() && *w > 0.0) {
        Ok(())
    } else {
        Err(Error::InvalidScene(format!("weights must be positive, got {weights:?}")))
    }
}

/// The quadrilateral seen from the base point `P_F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularConfig {
    curvature: Curvature,
    directions: Directions,
    lengths: [f64; 4],
    weights: [f64; 4],
    basepoint: SurfacePoint,
    /// Frame angle of the A-direction at the base point.
    orientation: f64,
}

impl AngularConfig {
    pub fn new(
        k: Curvature,
        directions: Directions,
        lengths: [f64; 4],
        weights: [f64; 4],
        basepoint: SurfacePoint,
    ) -> Result<Self> {
        basepoint.check_model(k)?;
        if !lengths.iter().all(|l| l.is_finite() && *l > 0.0) {
            return Err(Error::InvalidScene(format!("arc lengths must be positive, got {lengths:?}")));
        }
        check_weights(&weights)?;
        if k.model() == Model::Spherical {
            let check = angular_perimeter_check(k, &directions, &lengths);
            if !check.ok {
                return Err(Error::PerimeterTooLarge { perimeter: check.perimeter, bound: check.bound });
            }
        }
        Ok(AngularConfig { curvature: k, directions, lengths, weights, basepoint, orientation: 0.0 })
    }

    /// Configuration at the model origin.
    pub fn at_origin(k: Curvature, directions: Directions, lengths: [f64; 4], weights: [f64; 4]) -> Result<Self> {
        AngularConfig::new(k, directions, lengths, weights, k.origin())
    }

    pub fn with_orientation(mut self, orientation: f64) -> Self {
        self.orientation = wrap_signed(orientation);
        self
    }

    pub fn with_weights(self, weights: [f64; 4]) -> Result<Self> {
        check_weights(&weights)?;
        Ok(AngularConfig { weights, ..self })
    }

    pub fn with_lengths(self, lengths: [f64; 4]) -> Result<Self> {
        let cfg = AngularConfig::new(self.curvature, self.directions, lengths, self.weights, self.basepoint)?;
        Ok(cfg.with_orientation(self.orientation))
    }

    pub fn with_directions(self, directions: Directions) -> Self {
        AngularConfig { directions, ..self }
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn directions(&self) -> &Directions {
        &self.directions
    }

    pub fn lengths(&self) -> [f64; 4] {
        self.lengths
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    pub fn basepoint(&self) -> SurfacePoint {
        self.basepoint
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }
}

/// Vertices in counterclockwise order `A, B, C, D` with their weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexConfig {
    curvature: Curvature,
    vertices: [SurfacePoint; 4],
    weights: [f64; 4],
}

impl VertexConfig {
    pub fn new(k: Curvature, vertices: [SurfacePoint; 4], weights: [f64; 4]) -> Result<Self> {
        for v in &vertices {
            v.check_model(k)?;
        }
        check_weights(&weights)?;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = kplane::distance(k, &vertices[i], &vertices[j])?;
                if d == 0.0 {
                    return Err(Error::InvalidScene(format!(
                        "vertices {} and {} coincide",
                        Vertex::ALL[i].label(),
                        Vertex::ALL[j].label()
                    )));
                }
            }
        }
        Ok(VertexConfig { curvature: k, vertices, weights })
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn vertices(&self) -> &[SurfacePoint; 4] {
        &self.vertices
    }

    pub fn vertex(&self, v: Vertex) -> &SurfacePoint {
        &self.vertices[v.index()]
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    pub fn with_weights(self, weights: [f64; 4]) -> Result<Self> {
        check_weights(&weights)?;
        Ok(VertexConfig { weights, ..self })
    }

    pub fn with_vertex(self, v: Vertex, p: SurfacePoint) -> Result<Self> {
        let mut vertices = self.vertices;
        vertices[v.index()] = p;
        VertexConfig::new(self.curvature, vertices, self.weights)
    }
}

pub fn signed_angle(cfg: &AngularConfig, from: Vertex, to: Vertex) -> f64 {
    cfg.directions.signed_angle(from, to)
}

/// Places vertex `R` at `exp(l_R · (cos θ_R, sin θ_R))` from the base point.
pub fn realize_vertices(cfg: &AngularConfig) -> Result<VertexConfig> {
    let k = cfg.curvature;
    let mut vertices = [cfg.basepoint; 4];
    for v in Vertex::ALL {
        let t = cfg.directions.get(v) + cfg.orientation;
        let l = cfg.lengths[v.index()];
        vertices[v.index()] = kplane::exp_map(k, &TangentVector::new(cfg.basepoint, [l * t.cos(), l * t.sin()]))?;
    }
    VertexConfig::new(k, vertices, cfg.weights)
}

/// Reads the angular view of `vc` from the point `p`.
pub fn extract_angular(vc: &VertexConfig, p: &SurfacePoint) -> Result<AngularConfig> {
    let k = vc.curvature;
    let mut raw = [0.0; 4];
    let mut lengths = [0.0; 4];
    for v in Vertex::ALL {
        let t = kplane::log_map(k, p, vc.vertex(v))?;
        let l = t.norm();
        if l < 1e-15 {
            return Err(Error::DegenerateArc);
        }
        raw[v.index()] = t.direction();
        lengths[v.index()] = l;
    }
    let cfg = AngularConfig::new(k, Directions::new(raw)?, lengths, vc.weights, *p)?;
    Ok(cfg.with_orientation(raw[0]))
}

pub fn convexity_check(cfg: &AngularConfig) -> QuadPosition {
    cfg.directions.position()
}
