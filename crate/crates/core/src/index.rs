//! Upper estimates of the numerical index and the (modified) Davis-Wielandt
//! index by minimizing a radius over operators of unit norm.
//!
//! The objective `M ↦ radius(M / ‖M‖)` is scale invariant, so the search
//! runs unconstrained over nonzero matrices. Each restart is a compass
//! search over the `d²` matrix entries started from a seeded random matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::certifier;
use crate::error::{Error, Result};
use crate::metrics::{self, normalized_radius, Operator, RadiusKind};
use crate::polytope::PolyhedralSpace;

const INITIAL_STEP: f64 = 0.25;

/// Evaluation budget per restart. Coordinate search can zigzag for a long
/// time near kinks of the max-type objective; a restart that runs out of
/// budget keeps its incumbent and clears `converged`.
const MAX_EVALS_PER_RESTART: usize = 200_000;

/// A trial point must improve on the incumbent by at least `c·δ²`, and by
/// more than rounding noise.
const SUFFICIENT_DECREASE: f64 = 1e-4;

fn required_decrease(step: f64, value: f64) -> f64 {
    (SUFFICIENT_DECREASE * step * step).max(8.0 * f64::EPSILON * value.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEstimate {
    pub kind: RadiusKind,
    pub value: f64,
    pub witness: Operator,
    pub restarts_used: usize,
    pub seed: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexBracket {
    pub lower: f64,
    pub upper: f64,
}

/// Suggested restart count for a space of the given dimension.
pub fn default_restarts(dim: usize) -> usize {
    if dim <= 2 {
        64
    } else {
        256
    }
}

struct LocalResult {
    value: f64,
    point: Vec<f64>,
    converged: bool,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn objective(space: &PolyhedralSpace, m: &[f64], kind: RadiusKind) -> f64 {
    normalized_radius(space, m, kind).unwrap_or(f64::INFINITY)
}

fn compass_search(space: &PolyhedralSpace, kind: RadiusKind, start: Vec<f64>, tol: f64) -> LocalResult {
    let mut point = start;
    let mut best = objective(space, &point, kind);
    let mut step = INITIAL_STEP;
    let mut evals = 1;
    while step >= tol {
        if evals >= MAX_EVALS_PER_RESTART {
            return LocalResult { value: best, point, converged: false };
        }
        let mut improved = false;
        for k in 0..point.len() {
            for dir in [1.0, -1.0] {
                let old = point[k];
                point[k] = old + dir * step;
                let trial = objective(space, &point, kind);
                evals += 1;
                if trial < best - required_decrease(step, best) {
                    best = trial;
                    improved = true;
                    break;
                }
                point[k] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    LocalResult { value: best, point, converged: true }
}

fn run_restart(space: &PolyhedralSpace, kind: RadiusKind, seed: u64, restart: usize, tol: f64) -> LocalResult {
    let d = space.dim();
    let mut rng = restart_rng(seed, restart);
    let mut start: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
    // A zero draw is measure-zero but would stall the search.
    while start.iter().all(|&v| v == 0.0) {
        start = (0..d * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
    }
    compass_search(space, kind, start, tol)
}

/// Multistart estimate of `inf { radius(T) : ‖T‖ = 1 }`.
///
/// Restarts run in parallel; the reduction walks them in index order and
/// only replaces the incumbent on an improvement larger than `tol`, so the
/// result is identical for any thread count.
pub fn estimate_index(
    space: &PolyhedralSpace,
    kind: RadiusKind,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<IndexEstimate> {
    if restarts == 0 {
        return Err(Error::BadParameter("restarts must be at least 1".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadParameter(format!("tol must be positive, got {tol}")));
    }
    let results: Vec<LocalResult> = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(space, kind, seed, r, tol))
        .collect();

    let mut best: Option<&LocalResult> = None;
    for r in &results {
        match best {
            Some(b) if !(r.value < b.value - tol) => {}
            _ => best = Some(r),
        }
    }
    let best = best.expect("at least one restart");

    let d = space.dim();
    let raw = Operator::from_entries(d, best.point.clone())?;
    let norm = metrics::operator_norm(space, &raw)?.value;
    let witness = raw.scaled(1.0 / norm);
    let value = metrics::radius(space, &witness, kind)?.value;
    Ok(IndexEstimate {
        kind,
        value,
        witness,
        restarts_used: restarts,
        seed,
        converged: results.iter().all(|r| r.converged),
    })
}

/// Certified lower bound and searched upper bound for the (modified) index.
pub fn index_bracket(
    space: &PolyhedralSpace,
    kind: RadiusKind,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<IndexBracket> {
    if kind == RadiusKind::W {
        return Err(Error::BadParameter("bracketing is defined for dw and dwstar only".into()));
    }
    let upper = estimate_index(space, kind, restarts, seed, tol)?.value;
    let lower = certifier::index_lower_bound(space)?;
    Ok(IndexBracket { lower, upper })
}
