#![allow(dead_code)]

use std::f64::consts::TAU;

use ftquad::config::{AngularConfig, Directions, QuadPosition};
use ftquad::inverse::plasticity_line;
use ftquad::kplane::Curvature;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaps drawn uniformly from (5°, 175°), rescaled to sum to 2π, and redrawn
/// until every rescaled gap is still inside that range.
pub fn interior_directions(rng: &mut impl Rng) -> Directions {
    let (lo, hi) = (5f64.to_radians(), 175f64.to_radians());
    loop {
        let raw: [f64; 4] = std::array::from_fn(|_| rng.random_range(lo..hi));
        let total: f64 = raw.iter().sum();
        let gaps = raw.map(|g| g * TAU / total);
        if gaps.iter().all(|g| *g > lo && *g < hi) {
            let d = Directions::new([0.0, gaps[0], gaps[0] + gaps[1], gaps[0] + gaps[1] + gaps[2]]).unwrap();
            if d.position() == QuadPosition::Interior {
                return d;
            }
        }
    }
}

/// Directions with D opposite B, i.e. the point on the diagonal BD.
pub fn diagonal_directions(rng: &mut impl Rng) -> Directions {
    loop {
        let tb = rng.random_range(10f64.to_radians()..170f64.to_radians());
        let tc = rng.random_range(tb + 5f64.to_radians()..tb + 175f64.to_radians());
        let d = Directions::new([0.0, tb, tc, tb + std::f64::consts::PI]).unwrap();
        if d.position() == QuadPosition::OnDiagonalBD {
            return d;
        }
    }
}

/// Arc lengths scaled so that curved configurations stay well inside the
/// injectivity and perimeter bounds.
pub fn lengths(rng: &mut impl Rng, k: Curvature) -> [f64; 4] {
    let scale = if k.value() == 0.0 { 1.0 } else { 1.0 / k.value().abs().sqrt() };
    let hi = if k.value() > 0.0 { 0.6 } else { 2.0 };
    std::array::from_fn(|_| scale * rng.random_range(0.1..hi))
}

/// A budget and a `w_D` strictly inside the positivity interval.
pub fn interior_wd(rng: &mut impl Rng, dirs: &Directions, c: f64) -> f64 {
    let iv = plasticity_line(dirs, c).unwrap().positivity_interval;
    let (lo, hi) = (iv.lower, iv.upper);
    let pad = 0.05 * (hi - lo);
    rng.random_range(lo + pad..hi - pad)
}

pub fn curvatures() -> [Curvature; 3] {
    [Curvature::new(-1.0).unwrap(), Curvature::FLAT, Curvature::new(1.0).unwrap()]
}

pub fn at_origin(k: Curvature, dirs: Directions, lengths: [f64; 4], weights: [f64; 4]) -> AngularConfig {
    AngularConfig::at_origin(k, dirs, lengths, weights).unwrap()
}
