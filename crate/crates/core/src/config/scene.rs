//! On-disk scene format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AngularConfig, Directions, VertexConfig};
use crate::forward::SolverOptions;
use crate::kplane::{Curvature, SurfacePoint};

/// Coordinates read from a file may be off the model surface by this much;
/// they are projected back onto it.
const COORD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub curvature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular: Option<AngularSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<VertexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngularSpec {
    pub directions_deg: [f64; 4],
    pub lengths: [f64; 4],
    pub weights: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub points: [Vec<f64>; 4],
    pub weights: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    SolverOptions::default().tol
}

fn default_max_iter() -> usize {
    SolverOptions::default().max_iter
}

/// A scene that failed to load, located by field path and (for syntax and
/// type errors) line and column.
#[derive(Debug, Clone, Error)]
#[error("{path}: {message}{}", location.map(|(l, c)| format!(" at line {l} column {c}")).unwrap_or_default())]
pub struct SceneError {
    pub path: String,
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl SceneError {
    fn at(path: &str, err: crate::Error) -> Self {
        SceneError { path: path.to_string(), location: None, message: err.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneGeometry {
    Angular(AngularConfig),
    Vertices(VertexConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadScene {
    pub geometry: SceneGeometry,
    pub solver: SolverOptions,
}

impl QuadScene {
    pub fn from_json(text: &str) -> Result<Self, SceneError> {
        SceneFile::parse(text)?.build()
    }

    pub fn curvature(&self) -> Curvature {
        match &self.geometry {
            SceneGeometry::Angular(c) => c.curvature(),
            SceneGeometry::Vertices(v) => v.curvature(),
        }
    }

    pub fn weights(&self) -> [f64; 4] {
        match &self.geometry {
            SceneGeometry::Angular(c) => c.weights(),
            SceneGeometry::Vertices(v) => v.weights(),
        }
    }
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<Self, SceneError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let file: SceneFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            SceneError { path, location: Some((inner.line(), inner.column())), message: inner.to_string() }
        })?;
        de.end().map_err(|e| SceneError {
            path: ".".into(),
            location: Some((e.line(), e.column())),
            message: e.to_string(),
        })?;
        Ok(file)
    }

    pub fn build(&self) -> Result<QuadScene, SceneError> {
        let k = Curvature::new(self.curvature).map_err(|e| SceneError::at("curvature", e))?;
        let solver = match self.solver {
            None => SolverOptions::default(),
            Some(s) => {
                if !(s.tol.is_finite() && s.tol > 0.0) {
                    return Err(SceneError {
                        path: "solver.tol".into(),
                        location: None,
                        message: format!("tolerance must be positive, got {}", s.tol),
                    });
                }
                SolverOptions { tol: s.tol, max_iter: s.max_iter }
            }
        };
        let geometry = match (&self.angular, &self.vertices) {
            (Some(a), None) => {
                let dirs = Directions::from_degrees(a.directions_deg)
                    .map_err(|e| SceneError::at("angular.directions_deg", e))?;
                let cfg = AngularConfig::at_origin(k, dirs, a.lengths, a.weights)
                    .map_err(|e| SceneError::at("angular", e))?;
                SceneGeometry::Angular(cfg)
            }
            (None, Some(v)) => {
                let mut pts = [k.origin(); 4];
                for (i, c) in v.points.iter().enumerate() {
                    pts[i] = SurfacePoint::from_coords(k, c, COORD_TOL)
                        .map_err(|e| SceneError::at(&format!("vertices.points[{i}]"), e))?;
                }
                let vc = VertexConfig::new(k, pts, v.weights).map_err(|e| SceneError::at("vertices", e))?;
                SceneGeometry::Vertices(vc)
            }
            _ => {
                return Err(SceneError {
                    path: ".".into(),
                    location: None,
                    message: "exactly one of `angular` or `vertices` must be given".into(),
                })
            }
        };
        Ok(QuadScene { geometry, solver })
    }
}
