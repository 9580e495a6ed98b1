//! Geometry of the K-plane: the simply connected surface of constant
//! curvature `k`.
//!
//! `k > 0` is the sphere of radius `1/√k`, stored as unit directions in R³.
//! `k < 0` is the hyperbolic plane of radius `1/√(-k)`, stored on the upper
//! sheet of the unit hyperboloid `x₀² - x₁² - x₂² = 1`. `k = 0` is the
//! Euclidean plane. Lengths are always in user units; the model radius is
//! applied by every operation, so the stored coordinates never depend on the
//! magnitude of `k`, only on its sign.
//!
//! Tangent vectors are expressed in a canonical orthonormal frame at their
//! base point (see [`frame`]), which makes signed directions reproducible.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// `|k|` below this is treated as the flat plane.
pub const FLAT_THRESHOLD: f64 = 1e-12;

/// Points closer than this (in unit-model coordinates) to being antipodal
/// are rejected.
pub const ANTIPODAL_TOL: f64 = 1e-9;

/// Scaled arc lengths below this use the Euclidean formulas.
const SHORT_ARC: f64 = 1e-8;

/// Tolerance allowed when validating stored model coordinates.
const MODEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Spherical,
    Flat,
    Hyperbolic,
}

/// Gaussian curvature of the model plane, in 1/length².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Curvature(f64);

impl Curvature {
    pub const FLAT: Curvature = Curvature(0.0);

    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() {
            Ok(Curvature(k))
        } else {
            Err(Error::InvalidCurvature(k))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn model(self) -> Model {
        if self.0.abs() < FLAT_THRESHOLD {
            Model::Flat
        } else if self.0 > 0.0 {
            Model::Spherical
        } else {
            Model::Hyperbolic
        }
    }

    /// `√|k|`, zero on the flat plane.
    fn scale(self) -> f64 {
        match self.model() {
            Model::Flat => 0.0,
            _ => self.0.abs().sqrt(),
        }
    }

    /// Upper bound `π/√k` on the length of a geodesic step; infinite unless
    /// the model is a sphere.
    pub fn max_length(self) -> f64 {
        match self.model() {
            Model::Spherical => PI / self.scale(),
            _ => f64::INFINITY,
        }
    }

    /// Largest admissible triangle perimeter, `2π/√k` on the sphere.
    pub fn perimeter_bound(self) -> f64 {
        2.0 * self.max_length()
    }

    /// The model origin: `(0, 0)`, the north pole, or the hyperboloid apex.
    pub fn origin(self) -> SurfacePoint {
        match self.model() {
            Model::Flat => SurfacePoint::Planar([0.0, 0.0]),
            Model::Spherical => SurfacePoint::Spherical([0.0, 0.0, 1.0]),
            Model::Hyperbolic => SurfacePoint::Hyperbolic([1.0, 0.0, 0.0]),
        }
    }
}

/// A point on the K-plane in the canonical coordinates of its model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SurfacePoint {
    Planar([f64; 2]),
    Spherical([f64; 3]),
    Hyperbolic([f64; 3]),
}

impl SurfacePoint {
    pub fn planar(x: f64, y: f64) -> Self {
        SurfacePoint::Planar([x, y])
    }

    pub fn spherical(v: [f64; 3]) -> Result<Self> {
        let p = SurfacePoint::Spherical(v);
        p.validate()?;
        Ok(p)
    }

    pub fn hyperbolic(v: [f64; 3]) -> Result<Self> {
        let p = SurfacePoint::Hyperbolic(v);
        p.validate()?;
        Ok(p)
    }

    /// Builds a point for model `k` from raw coordinates, projecting onto the
    /// model when the input is within `tol` of it.
    pub fn from_coords(k: Curvature, coords: &[f64], tol: f64) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinates {coords:?}")));
        }
        match (k.model(), coords) {
            (Model::Flat, [x, y]) => Ok(SurfacePoint::Planar([*x, *y])),
            (Model::Spherical, [x, y, z]) => {
                let n = norm3([*x, *y, *z]);
                if (n - 1.0).abs() > tol {
                    return Err(Error::InvalidPoint(format!("sphere point {coords:?} has norm {n}, expected 1")));
                }
                Ok(SurfacePoint::Spherical([x / n, y / n, z / n]))
            }
            (Model::Hyperbolic, [x0, x1, x2]) => {
                let m = x0 * x0 - x1 * x1 - x2 * x2;
                if *x0 <= 0.0 || (m - 1.0).abs() > tol {
                    return Err(Error::InvalidPoint(format!(
                        "hyperboloid point {coords:?} has Minkowski norm {m}, expected 1 with x0 > 0"
                    )));
                }
                Ok(SurfacePoint::Hyperbolic([(1.0 + x1 * x1 + x2 * x2).sqrt(), *x1, *x2]))
            }
            (model, _) => {
                Err(Error::InvalidPoint(format!("{} coordinates do not fit the {model:?} model", coords.len())))
            }
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match self {
            SurfacePoint::Planar(c) => c.to_vec(),
            SurfacePoint::Spherical(c) | SurfacePoint::Hyperbolic(c) => c.to_vec(),
        }
    }

    pub fn model(&self) -> Model {
        match self {
            SurfacePoint::Planar(_) => Model::Flat,
            SurfacePoint::Spherical(_) => Model::Spherical,
            SurfacePoint::Hyperbolic(_) => Model::Hyperbolic,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SurfacePoint::Planar(c) => {
                if c.iter().all(|x| x.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!("{c:?}")))
                }
            }
            SurfacePoint::Spherical(c) => {
                let n = norm3(c);
                if (n - 1.0).abs() <= MODEL_TOL {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!("sphere point {c:?} has norm {n}")))
                }
            }
            SurfacePoint::Hyperbolic(c) => {
                let m = -mdot(c, c);
                if c[0] > 0.0 && (m - 1.0).abs() <= MODEL_TOL * c[0] * c[0] {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!("hyperboloid point {c:?} has Minkowski norm {m}")))
                }
            }
        }
    }

    /// Checks that the point belongs to the model selected by `k`.
    pub fn check_model(&self, k: Curvature) -> Result<()> {
        if self.model() != k.model() {
            return Err(Error::InvalidPoint(format!(
                "{:?} point used with {:?} curvature {}",
                self.model(),
                k.model(),
                k.value()
            )));
        }
        self.validate()
    }
}

/// A tangent vector at `base`, in the canonical frame of [`frame`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentVector {
    pub base: SurfacePoint,
    pub components: [f64; 2],
}

impl TangentVector {
    pub fn new(base: SurfacePoint, components: [f64; 2]) -> Self {
        TangentVector { base, components }
    }

    pub fn zero(base: SurfacePoint) -> Self {
        TangentVector { base, components: [0.0, 0.0] }
    }

    pub fn norm(&self) -> f64 {
        self.components[0].hypot(self.components[1])
    }

    /// Frame angle of the vector in `(-π, π]`.
    pub fn direction(&self) -> f64 {
        self.components[1].atan2(self.components[0])
    }
}

/// The canonical tangent frame at a curved-model point, as ambient vectors.
///
/// Sphere: the rotation about `ẑ × p` that carries the north pole to `p`,
/// applied to `(x̂, ŷ)`. Exact at the north pole; within `ANTIPODAL_TOL` of
/// the south pole the fixed frame `(x̂, -ŷ)` is used. Hyperboloid: the Lorentz
/// boost carrying the apex to `p`, applied to `(x̂₁, x̂₂)`. Both frames are
/// positively oriented, so counterclockwise angles agree with the flat case.
/// Planar points use the global axes and return `None`.
pub fn frame(p: &SurfacePoint) -> Option<([f64; 3], [f64; 3])> {
    match *p {
        SurfacePoint::Planar(_) => None,
        SurfacePoint::Spherical([x, y, z]) => {
            let s = 1.0 + z;
            if s < ANTIPODAL_TOL {
                return Some(([1.0, 0.0, 0.0], [0.0, -1.0, 0.0]));
            }
            Some(([1.0 - x * x / s, -x * y / s, -x], [-x * y / s, 1.0 - y * y / s, -y]))
        }
        SurfacePoint::Hyperbolic([x0, x1, x2]) => {
            let s = 1.0 + x0;
            Some(([x1, 1.0 + x1 * x1 / s, x1 * x2 / s], [x2, x1 * x2 / s, 1.0 + x2 * x2 / s]))
        }
    }
}

/// Geodesic distance between `p` and `q`.
pub fn distance(k: Curvature, p: &SurfacePoint, q: &SurfacePoint) -> Result<f64> {
    p.check_model(k)?;
    q.check_model(k)?;
    match (*p, *q) {
        (SurfacePoint::Planar(a), SurfacePoint::Planar(b)) => Ok((b[0] - a[0]).hypot(b[1] - a[1])),
        (SurfacePoint::Spherical(a), SurfacePoint::Spherical(b)) => {
            if norm3(add3(a, b)) < ANTIPODAL_TOL {
                return Err(Error::AntipodalPoints);
            }
            Ok(norm3(cross3(a, b)).atan2(dot3(a, b)) / k.scale())
        }
        (SurfacePoint::Hyperbolic(a), SurfacePoint::Hyperbolic(b)) => Ok(hyperbolic_unit_distance(a, b) / k.scale()),
        _ => unreachable!("models checked above"),
    }
}

fn hyperbolic_unit_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    // ⟨b-a, b-a⟩ = 4 sinh²(d/2), which stays accurate for short arcs.
    let d = sub3(b, a);
    let s2 = mdot(d, d).max(0.0);
    2.0 * (s2.sqrt() / 2.0).asinh()
}

/// Follows the geodesic from `v.base` with initial velocity `v` for unit time.
pub fn exp_map(k: Curvature, v: &TangentVector) -> Result<SurfacePoint> {
    v.base.check_model(k)?;
    let t = v.norm();
    if !t.is_finite() {
        return Err(Error::InvalidPoint(format!("non-finite tangent vector {:?}", v.components)));
    }
    if t >= k.max_length() {
        return Err(Error::StepTooLong { length: t, limit: k.max_length() });
    }
    if t == 0.0 {
        return Ok(v.base);
    }
    let [c0, c1] = v.components;
    match v.base {
        SurfacePoint::Planar([x, y]) => Ok(SurfacePoint::Planar([x + c0, y + c1])),
        SurfacePoint::Spherical(p) => {
            let (e1, e2) = frame(&v.base).expect("curved frame");
            let phi = t * k.scale();
            let dir = scale3(add3(scale3(e1, c0), scale3(e2, c1)), 1.0 / t);
            let q = add3(scale3(p, phi.cos()), scale3(dir, phi.sin()));
            let n = norm3(q);
            Ok(SurfacePoint::Spherical(scale3(q, 1.0 / n)))
        }
        SurfacePoint::Hyperbolic(p) => {
            let (e1, e2) = frame(&v.base).expect("curved frame");
            let phi = t * k.scale();
            let dir = scale3(add3(scale3(e1, c0), scale3(e2, c1)), 1.0 / t);
            let q = add3(scale3(p, phi.cosh()), scale3(dir, phi.sinh()));
            Ok(SurfacePoint::Hyperbolic([(1.0 + q[1] * q[1] + q[2] * q[2]).sqrt(), q[1], q[2]]))
        }
    }
}

/// Inverse of [`exp_map`]: the initial velocity of the shortest arc from
/// `base` to `target`, with norm equal to their distance.
pub fn log_map(k: Curvature, base: &SurfacePoint, target: &SurfacePoint) -> Result<TangentVector> {
    base.check_model(k)?;
    target.check_model(k)?;
    let components = match (*base, *target) {
        (SurfacePoint::Planar(a), SurfacePoint::Planar(b)) => [b[0] - a[0], b[1] - a[1]],
        (SurfacePoint::Spherical(p), SurfacePoint::Spherical(q)) => {
            if norm3(add3(p, q)) < ANTIPODAL_TOL {
                return Err(Error::AntipodalPoints);
            }
            let d = dot3(p, q);
            let w = sub3(q, scale3(p, d));
            let s = norm3(w);
            if s == 0.0 {
                [0.0, 0.0]
            } else {
                let (e1, e2) = frame(base).expect("curved frame");
                let len = norm3(cross3(p, q)).atan2(d) / k.scale();
                unit_components(dot3(w, e1), dot3(w, e2), len)
            }
        }
        (SurfacePoint::Hyperbolic(p), SurfacePoint::Hyperbolic(q)) => {
            let ip = mdot(p, q);
            let w = add3(q, scale3(p, ip));
            let (e1, e2) = frame(base).expect("curved frame");
            let len = hyperbolic_unit_distance(p, q) / k.scale();
            unit_components(mdot(w, e1), mdot(w, e2), len)
        }
        _ => unreachable!("models checked above"),
    };
    Ok(TangentVector { base: *base, components })
}

fn unit_components(u: f64, v: f64, len: f64) -> [f64; 2] {
    let n = u.hypot(v);
    if n == 0.0 || len == 0.0 {
        [0.0, 0.0]
    } else {
        [u / n * len, v / n * len]
    }
}

/// Unsigned angle at `vertex` between the shortest arcs to `p` and `q`.
pub fn angle_at(k: Curvature, vertex: &SurfacePoint, p: &SurfacePoint, q: &SurfacePoint) -> Result<f64> {
    let u = log_map(k, vertex, p)?;
    let v = log_map(k, vertex, q)?;
    if u.norm() < 1e-15 || v.norm() < 1e-15 {
        return Err(Error::DegenerateArc);
    }
    let [a, b] = u.components;
    let [c, d] = v.components;
    Ok((a * d - b * c).abs().atan2(a * c + b * d))
}

/// `hav_k(x)`: `sin²(√k x/2)/k`, `x²/4`, or `sinh²(√-k x/2)/(-k)`.
///
/// With [`sn`] this gives the cancellation-free law of cosines
/// `hav(c) = hav(a-b) + sn(a) sn(b) sin²(γ/2)` and its companion
/// `hav(a+b) - hav(c) = sn(a) sn(b) cos²(γ/2)`, valid for every `k`.
fn hav(k: Curvature, x: f64) -> f64 {
    let r = k.scale();
    if k.model() == Model::Flat || (r * x).abs() < SHORT_ARC {
        return x * x / 4.0;
    }
    match k.model() {
        Model::Spherical => (r * x / 2.0).sin().powi(2) / (r * r),
        _ => (r * x / 2.0).sinh().powi(2) / (r * r),
    }
}

fn sn(k: Curvature, x: f64) -> f64 {
    let r = k.scale();
    if k.model() == Model::Flat || (r * x).abs() < SHORT_ARC {
        return x;
    }
    match k.model() {
        Model::Spherical => (r * x).sin() / r,
        _ => (r * x).sinh() / r,
    }
}

fn inverse_hav(k: Curvature, h: f64) -> f64 {
    let h = h.max(0.0);
    let r = k.scale();
    if k.model() == Model::Flat || r * r * h < SHORT_ARC * SHORT_ARC {
        return 2.0 * h.sqrt();
    }
    match k.model() {
        Model::Spherical => 2.0 * (r * h.sqrt()).min(1.0).asin() / r,
        _ => 2.0 * (r * h.sqrt()).asinh() / r,
    }
}

/// Angle opposite side `c` in the K-plane triangle with sides `a`, `b`, `c`.
pub fn loc_angle_from_sides(k: Curvature, a: f64, b: f64, c: f64) -> Result<f64> {
    if ![a, b, c].iter().all(|x| x.is_finite() && *x >= 0.0) {
        return Err(Error::TriangleInequalityViolated { a, b, c });
    }
    if a == 0.0 || b == 0.0 {
        return Err(Error::DegenerateArc);
    }
    let slack = 1e-12 * (a + b + c);
    if c > a + b + slack || a > b + c + slack || b > a + c + slack {
        return Err(Error::TriangleInequalityViolated { a, b, c });
    }
    let perimeter = a + b + c;
    if perimeter >= k.perimeter_bound() {
        return Err(Error::PerimeterTooLarge { perimeter, bound: k.perimeter_bound() });
    }
    let hc = hav(k, c);
    let sin_half = (hc - hav(k, a - b)).max(0.0).sqrt();
    let cos_half = (hav(k, a + b) - hc).max(0.0).sqrt();
    Ok(2.0 * sin_half.atan2(cos_half))
}

/// Third side of the K-plane triangle with sides `a`, `b` enclosing `gamma`.
pub fn loc_side_from_sides_angle(k: Curvature, a: f64, b: f64, gamma: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
        return Err(Error::Precondition(format!("side lengths must be non-negative, got {a}, {b}")));
    }
    if !(0.0..=PI).contains(&gamma) {
        return Err(Error::Precondition(format!("included angle {gamma} outside [0, π]")));
    }
    let limit = k.max_length();
    if a >= limit || b >= limit {
        return Err(Error::StepTooLong { length: a.max(b), limit });
    }
    let h = hav(k, a - b) + sn(k, a) * sn(k, b) * (gamma / 2.0).sin().powi(2);
    Ok(inverse_hav(k, h))
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Minkowski form `-a₀b₀ + a₁b₁ + a₂b₂`.
pub(crate) fn mdot(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn euclidean_hypotenuse() {
        let d = distance(k(0.0), &SurfacePoint::planar(0.0, 0.0), &SurfacePoint::planar(3.0, 4.0)).unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn quarter_great_circle() {
        let north = k(1.0).origin();
        let eq = SurfacePoint::spherical([1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(distance(k(1.0), &north, &eq).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        // radius 2 sphere
        assert_abs_diff_eq!(distance(k(0.25), &north, &eq).unwrap(), PI, epsilon = 1e-14);
    }

    #[test]
    fn hyperbolic_exp_then_distance() {
        let apex = k(-1.0).origin();
        for dir in [0.0, 0.7, 2.5, -1.9] {
            let v = TangentVector::new(apex, [2.0 * f64::cos(dir), 2.0 * f64::sin(dir)]);
            let q = exp_map(k(-1.0), &v).unwrap();
            assert_abs_diff_eq!(distance(k(-1.0), &apex, &q).unwrap(), 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn antipodes_are_rejected() {
        let n = k(1.0).origin();
        let s = SurfacePoint::spherical([0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(distance(k(1.0), &n, &s), Err(Error::AntipodalPoints)));
        assert!(matches!(log_map(k(1.0), &n, &s), Err(Error::AntipodalPoints)));
    }

    #[test]
    fn exp_translation_and_identity() {
        let base = SurfacePoint::planar(1.0, 1.0);
        let q = exp_map(k(0.0), &TangentVector::new(base, [2.0, 0.0])).unwrap();
        assert_eq!(q, SurfacePoint::planar(3.0, 1.0));
        for kv in [-1.0, 0.0, 1.0] {
            let b = k(kv).origin();
            assert_eq!(exp_map(k(kv), &TangentVector::zero(b)).unwrap(), b);
        }
    }

    #[test]
    fn exp_from_pole_matches_rotation() {
        // Rotating the north pole by π/2 about the axis orthogonal to the
        // direction (cos φ, sin φ, 0) lands on the equator at angle φ.
        let north = k(1.0).origin();
        for phi in [0.0f64, 0.4, 2.0, -2.8] {
            let v = TangentVector::new(north, [FRAC_PI_2 * phi.cos(), FRAC_PI_2 * phi.sin()]);
            let SurfacePoint::Spherical(q) = exp_map(k(1.0), &v).unwrap() else { panic!() };
            // Rodrigues: axis n = ẑ × d, angle π/2 maps ẑ to d.
            let d = [phi.cos(), phi.sin(), 0.0];
            let n = cross3([0.0, 0.0, 1.0], d);
            let z = [0.0, 0.0, 1.0];
            let (s, c) = (FRAC_PI_2.sin(), FRAC_PI_2.cos());
            let rot = add3(add3(scale3(z, c), scale3(cross3(n, z), s)), scale3(n, dot3(n, z) * (1.0 - c)));
            for i in 0..3 {
                assert_abs_diff_eq!(q[i], rot[i], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn step_too_long_on_sphere() {
        let north = k(4.0).origin();
        let v = TangentVector::new(north, [PI / 2.0, 0.0]);
        assert!(matches!(exp_map(k(4.0), &v), Err(Error::StepTooLong { .. })));
    }

    #[test]
    fn log_examples() {
        let o = SurfacePoint::planar(0.0, 0.0);
        let v = log_map(k(0.0), &o, &SurfacePoint::planar(0.0, 5.0)).unwrap();
        assert_eq!(v.components, [0.0, 5.0]);
        for kv in [-1.0, 0.0, 1.0] {
            let b = k(kv).origin();
            assert_eq!(log_map(k(kv), &b, &b).unwrap().components, [0.0, 0.0]);
        }
    }

    #[test]
    fn frames_are_orthonormal() {
        let sphere_pts = [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [0.0, -0.6, -0.8], [0.48, 0.6, -0.64]];
        for p in sphere_pts {
            let (e1, e2) = frame(&SurfacePoint::Spherical(p)).unwrap();
            assert_abs_diff_eq!(dot3(e1, e1), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(dot3(e2, e2), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(dot3(e1, e2), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(dot3(e1, p), 0.0, epsilon = 1e-14);
            // positively oriented: e1 × e2 = p
            let n = cross3(e1, e2);
            for i in 0..3 {
                assert_abs_diff_eq!(n[i], p[i], epsilon = 1e-14);
            }
        }
        let south = frame(&SurfacePoint::Spherical([0.0, 0.0, -1.0])).unwrap();
        assert_eq!(south, ([1.0, 0.0, 0.0], [0.0, -1.0, 0.0]));

        let h = [(1.0f64 + 0.3 * 0.3 + 1.2 * 1.2).sqrt(), 0.3, -1.2];
        let (e1, e2) = frame(&SurfacePoint::Hyperbolic(h)).unwrap();
        assert_abs_diff_eq!(mdot(e1, e1), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mdot(e2, e2), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mdot(e1, e2), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(mdot(e1, h), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn angle_examples() {
        let o = SurfacePoint::planar(0.0, 0.0);
        let p = SurfacePoint::planar(1.0, 0.0);
        let q = SurfacePoint::planar(0.0, 1.0);
        assert_abs_diff_eq!(angle_at(k(0.0), &o, &p, &q).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(angle_at(k(0.0), &o, &p, &p).unwrap(), 0.0);
        assert!(matches!(angle_at(k(0.0), &o, &o, &p), Err(Error::DegenerateArc)));

        // Octant triangle: every vertex angle is π/2, as the law of cosines says.
        let s = k(1.0);
        let x = SurfacePoint::spherical([1.0, 0.0, 0.0]).unwrap();
        let y = SurfacePoint::spherical([0.0, 1.0, 0.0]).unwrap();
        let z = SurfacePoint::spherical([0.0, 0.0, 1.0]).unwrap();
        let oracle = loc_angle_from_sides(s, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        for (v, a, b) in [(x, y, z), (y, z, x), (z, x, y)] {
            assert_abs_diff_eq!(angle_at(s, &v, &a, &b).unwrap(), oracle, epsilon = 1e-14);
        }
    }

    #[test]
    fn law_of_cosines_examples() {
        assert_abs_diff_eq!(loc_angle_from_sides(k(0.0), 3.0, 4.0, 5.0).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(loc_angle_from_sides(k(0.0), 1.0, 1.0, 1.0).unwrap(), PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            loc_angle_from_sides(k(1.0), FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(loc_side_from_sides_angle(k(0.0), 3.0, 4.0, FRAC_PI_2).unwrap(), 5.0, epsilon = 1e-14);
        for kv in [-1.0, 0.0, 1.0] {
            assert_abs_diff_eq!(loc_side_from_sides_angle(k(kv), 1.3, 0.4, 0.0).unwrap(), 0.9, epsilon = 1e-14);
            assert_abs_diff_eq!(loc_side_from_sides_angle(k(kv), 1.3, 0.4, 1e-9).unwrap(), 0.9, epsilon = 1e-8);
        }
    }

    #[test]
    fn hyperbolic_right_angle_third_side() {
        // Direct hyperboloid construction: two unit geodesics from the apex
        // along orthogonal axes, then measure the distance between their ends.
        let h = k(-1.0);
        let apex = h.origin();
        let p = exp_map(h, &TangentVector::new(apex, [1.0, 0.0])).unwrap();
        let q = exp_map(h, &TangentVector::new(apex, [0.0, 1.0])).unwrap();
        let oracle = distance(h, &p, &q).unwrap();
        let side = loc_side_from_sides_angle(h, 1.0, 1.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(side, oracle, epsilon = 1e-13);
        assert_abs_diff_eq!(side, (1.0f64.cosh().powi(2)).acosh(), epsilon = 1e-13);
        assert_abs_diff_eq!(side, 1.513_374_006_596_504, epsilon = 1e-12);
    }

    #[test]
    fn triangle_errors() {
        assert!(matches!(loc_angle_from_sides(k(0.0), 1.0, 1.0, 3.0), Err(Error::TriangleInequalityViolated { .. })));
        assert!(matches!(loc_angle_from_sides(k(1.0), 2.0, 2.0, 2.5), Err(Error::PerimeterTooLarge { .. })));
        assert!(matches!(loc_side_from_sides_angle(k(1.0), 3.2, 0.5, 1.0), Err(Error::StepTooLong { .. })));
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let p = SurfacePoint::planar(0.0, 0.0);
        assert!(matches!(distance(k(1.0), &p, &p), Err(Error::InvalidPoint(_))));
        assert!(SurfacePoint::spherical([1.0, 1.0, 0.0]).is_err());
        assert!(SurfacePoint::hyperbolic([-1.0, 0.0, 0.0]).is_err());
        assert!(Curvature::new(f64::NAN).is_err());
    }

    #[test]
    fn coords_projection() {
        let p = SurfacePoint::from_coords(k(1.0), &[0.0, 0.6, 0.8000001], 1e-6).unwrap();
        assert!(p.check_model(k(1.0)).is_ok());
        let h = SurfacePoint::from_coords(k(-2.0), &[2f64.sqrt() + 4e-8, 1.0, 0.0], 1e-6).unwrap();
        assert!(h.check_model(k(-2.0)).is_ok());
        assert!(SurfacePoint::from_coords(k(0.0), &[1.0, 2.0, 3.0], 1e-6).is_err());
    }
}
