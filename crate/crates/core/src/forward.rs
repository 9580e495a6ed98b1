//! Forward problem: the point minimizing `Σ w_R · d(P, R)`.
//!
//! The solver is a Riemannian Weiszfeld iteration `P ← exp_P(τ g)` with
//! `g = Σ w_R u_R` (unit directions towards the vertices) and
//! `τ = 1 / Σ (w_R / l_R)`, with step halving to keep the objective from
//! increasing.

use serde::Serialize;

use crate::config::{AngularConfig, Directions, Vertex, VertexConfig};
use crate::error::{Error, Result};
use crate::kplane::{self, Curvature, Model, SurfacePoint, TangentVector};

/// Iterates this close to a vertex trigger the vertex guard.
pub const VERTEX_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertex")]
pub enum FtStatus {
    Interior,
    AbsorbedAtVertex(Vertex),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FtResult {
    pub point: SurfacePoint,
    pub objective: f64,
    pub arc_lengths: [f64; 4],
    /// Normalized arc directions at the point; absent when it is a vertex.
    pub directions: Option<Directions>,
    /// `‖Σ w_R u_R‖` at an interior point; at an absorbing vertex, the
    /// amount by which the pull of the others exceeds its weight (zero).
    pub residual: f64,
    pub status: FtStatus,
    pub iterations: usize,
}

/// The stationarity sums `Σ_Q w_Q cos ∠QPR` for each `R`, and the balance
/// vector `Σ w_Q u_Q` they are projections of.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationarityResidual {
    pub projections: [f64; 4],
    pub vector: [f64; 2],
    pub norm: f64,
}

pub fn stationarity_residual(cfg: &AngularConfig) -> StationarityResidual {
    stationarity_of(cfg.directions(), &cfg.weights())
}

pub(crate) fn stationarity_of(dirs: &Directions, weights: &[f64; 4]) -> StationarityResidual {
    let mut vector = [0.0; 2];
    for v in Vertex::ALL {
        let u = dirs.unit(v);
        vector[0] += weights[v.index()] * u[0];
        vector[1] += weights[v.index()] * u[1];
    }
    let mut projections = [0.0; 4];
    for r in Vertex::ALL {
        projections[r.index()] =
            Vertex::ALL.iter().map(|&q| weights[q.index()] * (dirs.get(q) - dirs.get(r)).cos()).sum();
    }
    StationarityResidual { projections, vector, norm: vector[0].hypot(vector[1]) }
}

pub fn objective(vc: &VertexConfig, p: &SurfacePoint) -> Result<f64> {
    let w = vc.weights();
    let mut f = 0.0;
    for v in Vertex::ALL {
        f += w[v.index()] * kplane::distance(vc.curvature(), p, vc.vertex(v))?;
    }
    Ok(f)
}

/// Pull of the other three vertices at vertex `at`: `Σ_{Q≠R} w_Q u_Q(R)`.
fn pull_at(vc: &VertexConfig, at: Vertex) -> Result<[f64; 2]> {
    let k = vc.curvature();
    let base = vc.vertex(at);
    let w = vc.weights();
    let mut pull = [0.0; 2];
    for q in Vertex::ALL.into_iter().filter(|q| *q != at) {
        let t = kplane::log_map(k, base, vc.vertex(q))?;
        let n = t.norm();
        pull[0] += w[q.index()] * t.components[0] / n;
        pull[1] += w[q.index()] * t.components[1] / n;
    }
    Ok(pull)
}

/// Whether vertex `at` is itself the minimizer: `‖Σ_{Q≠R} w_Q u_Q(R)‖ ≤ w_R`.
pub fn vertex_absorption_test(vc: &VertexConfig, at: Vertex) -> bool {
    match pull_at(vc, at) {
        Ok(p) => p[0].hypot(p[1]) <= vc.weights()[at.index()],
        Err(_) => false,
    }
}

struct Probe {
    objective: f64,
    balance: [f64; 2],
    inv_len_sum: f64,
    lengths: [f64; 4],
    nearest: (Vertex, f64),
}

fn probe(vc: &VertexConfig, p: &SurfacePoint) -> Result<Probe> {
    let k = vc.curvature();
    let w = vc.weights();
    let mut out = Probe {
        objective: 0.0,
        balance: [0.0; 2],
        inv_len_sum: 0.0,
        lengths: [0.0; 4],
        nearest: (Vertex::A, f64::INFINITY),
    };
    for v in Vertex::ALL {
        let t = kplane::log_map(k, p, vc.vertex(v))?;
        let l = t.norm();
        out.lengths[v.index()] = l;
        out.objective += w[v.index()] * l;
        if l < out.nearest.1 {
            out.nearest = (v, l);
        }
        if l > 0.0 {
            out.balance[0] += w[v.index()] * t.components[0] / l;
            out.balance[1] += w[v.index()] * t.components[1] / l;
            out.inv_len_sum += w[v.index()] / l;
        }
    }
    Ok(out)
}

fn initial_point(vc: &VertexConfig) -> Result<SurfacePoint> {
    let k = vc.curvature();
    let w = vc.weights();
    let total: f64 = w.iter().sum();
    let a = vc.vertex(Vertex::A);
    let mut mean = [0.0; 2];
    for v in Vertex::ALL {
        let t = kplane::log_map(k, a, vc.vertex(v))?;
        mean[0] += w[v.index()] * t.components[0] / total;
        mean[1] += w[v.index()] * t.components[1] / total;
    }
    kplane::exp_map(k, &TangentVector::new(*a, mean))
}

fn min_vertex_separation(vc: &VertexConfig, at: Vertex) -> Result<f64> {
    let mut d = f64::INFINITY;
    for q in Vertex::ALL.into_iter().filter(|q| *q != at) {
        d = d.min(kplane::distance(vc.curvature(), vc.vertex(at), vc.vertex(q))?);
    }
    Ok(d)
}

/// Moves off a non-absorbing vertex along the pull of the other three.
fn escape_vertex(vc: &VertexConfig, at: Vertex) -> Result<SurfacePoint> {
    let pull = pull_at(vc, at)?;
    let n = pull[0].hypot(pull[1]);
    let step = 1e-3 * min_vertex_separation(vc, at)?;
    let dir = if n > 0.0 { [pull[0] / n, pull[1] / n] } else { [1.0, 0.0] };
    kplane::exp_map(vc.curvature(), &TangentVector::new(*vc.vertex(at), [step * dir[0], step * dir[1]]))
}

fn finish(vc: &VertexConfig, p: SurfacePoint, pr: &Probe, iterations: usize) -> Result<FtResult> {
    let k = vc.curvature();
    let mut raw = [0.0; 4];
    for v in Vertex::ALL {
        raw[v.index()] = kplane::log_map(k, &p, vc.vertex(v))?.direction();
    }
    Ok(FtResult {
        point: p,
        objective: pr.objective,
        arc_lengths: pr.lengths,
        directions: Some(Directions::new(raw)?),
        residual: pr.balance[0].hypot(pr.balance[1]),
        status: FtStatus::Interior,
        iterations,
    })
}

fn absorbed(vc: &VertexConfig, at: Vertex) -> Result<FtResult> {
    let p = *vc.vertex(at);
    let mut lengths = [0.0; 4];
    for v in Vertex::ALL {
        lengths[v.index()] = kplane::distance(vc.curvature(), &p, vc.vertex(v))?;
    }
    let objective = vc.weights().iter().zip(lengths).map(|(w, l)| w * l).sum();
    let pull = pull_at(vc, at)?;
    Ok(FtResult {
        point: p,
        objective,
        arc_lengths: lengths,
        directions: None,
        residual: (pull[0].hypot(pull[1]) - vc.weights()[at.index()]).max(0.0),
        status: FtStatus::AbsorbedAtVertex(at),
        iterations: 0,
    })
}

fn step_cap(k: Curvature) -> f64 {
    match k.model() {
        Model::Spherical => 0.25 * k.max_length(),
        _ => f64::INFINITY,
    }
}

pub fn solve_forward(vc: &VertexConfig, opts: &SolverOptions) -> Result<FtResult> {
    solve_forward_traced(vc, opts, &mut |_| {})
}

/// As [`solve_forward`], reporting the objective at every accepted iterate.
pub fn solve_forward_traced(vc: &VertexConfig, opts: &SolverOptions, trace: &mut dyn FnMut(f64)) -> Result<FtResult> {
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(Error::InvalidScene(format!("solver tolerance must be positive, got {}", opts.tol)));
    }
    let k = vc.curvature();
    if k.model() == Model::Spherical {
        let check = crate::config::vertex_perimeter_check(vc)?;
        if !check.ok {
            return Err(Error::PerimeterTooLarge { perimeter: check.perimeter, bound: check.bound });
        }
    }
    // The objective is convex, so a vertex satisfying the absorption
    // condition is the global minimizer.
    if let Some(v) = Vertex::ALL.into_iter().find(|v| vertex_absorption_test(vc, *v)) {
        return absorbed(vc, v);
    }

    let mut p = initial_point(vc)?;
    let mut pr = probe(vc, &p)?;
    if pr.nearest.1 < VERTEX_GUARD {
        p = escape_vertex(vc, pr.nearest.0)?;
        pr = probe(vc, &p)?;
    }
    trace(pr.objective);
    let cap = step_cap(k);
    for it in 0..opts.max_iter {
        let residual = pr.balance[0].hypot(pr.balance[1]);
        if residual <= opts.tol {
            return finish(vc, p, &pr, it);
        }
        let tau = 1.0 / pr.inv_len_sum;
        let mut step = [tau * pr.balance[0], tau * pr.balance[1]];
        let len = step[0].hypot(step[1]);
        if len > cap {
            step = [step[0] * cap / len, step[1] * cap / len];
        }
        let slack = 8.0 * f64::EPSILON * pr.objective.abs();
        let mut t = 1.0;
        let accepted = loop {
            let q = kplane::exp_map(k, &TangentVector::new(p, [t * step[0], t * step[1]]))?;
            let qr = probe(vc, &q)?;
            if qr.objective <= pr.objective + slack {
                break Some((q, qr));
            }
            t *= 0.5;
            if t < 1e-20 {
                break None;
            }
        };
        let Some((q, qr)) = accepted else {
            // No descent at machine precision: the iterate is as good as it gets.
            break;
        };
        p = q;
        pr = qr;
        if pr.nearest.1 < VERTEX_GUARD {
            p = escape_vertex(vc, pr.nearest.0)?;
            pr = probe(vc, &p)?;
        }
        trace(pr.objective);
    }
    let best = finish(vc, p, &pr, opts.max_iter)?;
    if best.residual <= opts.tol {
        return Ok(best);
    }
    Err(Error::NoConvergence { best: Box::new(best) })
}
