use thiserror::Error;

use crate::forward::FtResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("curvature must be finite, got {0}")]
    InvalidCurvature(f64),

    #[error("point is not valid for this model: {0}")]
    InvalidPoint(String),

    #[error("points are antipodal; the shortest arc is not unique")]
    AntipodalPoints,

    #[error("geodesic step of length {length} reaches the conjugate limit {limit}")]
    StepTooLong { length: f64, limit: f64 },

    #[error("degenerate arc: endpoint coincides with the vertex")]
    DegenerateArc,

    #[error("sides ({a}, {b}, {c}) violate the triangle inequality")]
    TriangleInequalityViolated { a: f64, b: f64, c: f64 },

    #[error("perimeter {perimeter} is not below the bound {bound}")]
    PerimeterTooLarge { perimeter: f64, bound: f64 },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("solver did not converge after {} iterations (residual {})", best.iterations, best.residual)]
    NoConvergence { best: Box<FtResult> },

    #[error("linear system is singular (scaled determinant {determinant:e})")]
    SingularSystem { determinant: f64 },

    #[error("directions do not surround the point")]
    DegenerateTriangle,

    #[error("point does not lie on the diagonal BD")]
    NotOnDiagonal,

    #[error("weights satisfy neither class ordering nor the equal-opposite pattern")]
    NoClassApplicable,

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("angle-sum defect keeps one sign over the interpolation range ({defect_lo:e} .. {defect_hi:e})")]
    NoRoot { defect_lo: f64, defect_hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
