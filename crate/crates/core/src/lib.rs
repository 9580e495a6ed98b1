//! Weighted Fermat-Torricelli quadrilaterals on planes of constant curvature.
//!
//! - [`kplane`]: points, geodesics and the laws of cosines for any curvature.
//! - [`config`]: a quadrilateral seen from a base point, and scene files.
//! - [`forward`]: the minimizing point for given weights.
//! - [`inverse`]: the weights for a given point, as a one-parameter line.
//! - [`symmetry`]: parallelograms built from the weighted tangent image.
//! - [`comparison`]: comparison triangles and glued configurations.

pub mod comparison;
pub mod config;
pub mod error;
pub mod forward;
pub mod inverse;
pub mod kplane;
pub mod symmetry;

pub use error::{Error, Result};
