//! Brute-force checks that do not rely on the symmetric reduction: a
//! multi-start simplex search over the whole simplex, volumes measured on
//! constructed Cartesian simplices, and finite-difference derivatives.

mod derivative;
mod geometry;
mod nelder_mead;

pub use derivative::{central_difference, check_derivative, DERIVATIVE_FLOOR};
pub use geometry::{
    geometric_trials, measure_geometric, random_simplex, shape_quality, CartesianSimplex,
    GeometricSummary, MIN_SHAPE_QUALITY,
};
pub use nelder_mead::{Minimum, NelderMead};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimum::{solve_theta, DEFAULT_TOLERANCE};
use crate::simplex::{partial_sum, BarycentricPoint, CevianConfig};

/// Iterates with a coordinate outside `(BARRIER, 1 - BARRIER)` are rejected.
pub const BARRIER: f64 = 1e-9;

const INITIAL_STEP: f64 = 0.05;
const POLISH_STEP: f64 = 1e-3;
const POLISH_ROUNDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub best_value: f64,
    pub best_point: BarycentricPoint,
    pub restarts: usize,
    pub theoretical_max: f64,
    pub agreement_abs: f64,
    /// Max-norm distance to the equality point after sorting each group.
    pub argmax_distance: f64,
    pub seed: u64,
}

/// RNG for one restart: a fixed seed plus an independent stream per index.
pub fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point in the open `n`-simplex (normalized exponentials).
pub fn sample_interior<R: Rng>(rng: &mut R, n: usize) -> BarycentricPoint {
    loop {
        let e: Vec<f64> = (0..=n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = e.iter().sum();
        if let Ok(p) = BarycentricPoint::new(e.iter().map(|v| v / total).collect()) {
            if p.is_interior() {
                return p;
            }
        }
    }
}

fn full_coords(free: &[f64]) -> Vec<f64> {
    let mut c = free.to_vec();
    c.push(1.0 - free.iter().sum::<f64>());
    c
}

/// `-ln F_k` at the free coordinates, `+inf` outside the barrier.
fn neg_log_objective(cfg: &CevianConfig, free: &[f64]) -> f64 {
    let coords = full_coords(free);
    if coords.iter().any(|&c| !(c > BARRIER && c < 1.0 - BARRIER)) {
        return f64::INFINITY;
    }
    // log keeps the spread criterion relative however small F_k gets
    match partial_sum(&BarycentricPoint::from_raw(coords), cfg) {
        Ok(v) if v > 0.0 => -v.ln(),
        _ => f64::INFINITY,
    }
}

/// Starting polytope around `free`: one vertex per axis, stepping by `step`
/// (or its negative, or halved) until the vertex is admissible.
fn initial_vertices(cfg: &CevianConfig, free: &[f64], step: f64) -> Vec<Vec<f64>> {
    let mut vertices = vec![free.to_vec()];
    for axis in 0..free.len() {
        let mut delta = step;
        let vertex = loop {
            let mut up = free.to_vec();
            up[axis] += delta;
            if neg_log_objective(cfg, &up).is_finite() {
                break up;
            }
            let mut down = free.to_vec();
            down[axis] -= delta;
            if neg_log_objective(cfg, &down).is_finite() || delta < 1e-300 {
                break down;
            }
            delta *= 0.5;
        };
        vertices.push(vertex);
    }
    vertices
}

fn local_search(cfg: &CevianConfig, start: &BarycentricPoint) -> (f64, Vec<f64>) {
    let nm = NelderMead::default();
    let objective = |x: &[f64]| neg_log_objective(cfg, x);
    let free = &start.coords()[..cfg.n()];
    let mut best = nm.minimize(objective, initial_vertices(cfg, free, INITIAL_STEP));
    for _ in 0..POLISH_ROUNDS {
        let next = nm.minimize(objective, initial_vertices(cfg, &best.x, POLISH_STEP));
        let improved = next.value < best.value;
        let gain = best.value - next.value;
        if improved {
            best = next;
        }
        if gain.is_nan() || gain <= 1e-15 {
            break;
        }
    }
    let coords = full_coords(&best.x);
    let value = partial_sum(&BarycentricPoint::from_raw(coords.clone()), cfg).unwrap_or(0.0);
    (value, coords)
}

/// Multi-start maximization of `F_k` over the open simplex.
///
/// Restarts run in parallel on the current rayon pool; each uses its own
/// RNG stream, and the merge keeps the largest value with ties going to the
/// lowest restart index, so the report depends only on the arguments.
pub fn maximize_direct(cfg: &CevianConfig, restarts: usize, seed: u64) -> Result<OracleReport> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(seed, r as u64);
            let start = sample_interior(&mut rng, cfg.n());
            local_search(cfg, &start)
        })
        .collect();

    let (best_value, best_coords) = runs
        .into_iter()
        .reduce(|best, next| if next.0 > best.0 { next } else { best })
        .expect("at least one restart");

    let theory = solve_theta(cfg, DEFAULT_TOLERANCE)?;
    let best_point = BarycentricPoint::from_raw(best_coords);
    Ok(OracleReport {
        agreement_abs: (best_value - theory.max_ratio).abs(),
        argmax_distance: canonical_distance(cfg, &best_point, &theory.equality_point),
        best_value,
        best_point,
        restarts,
        theoretical_max: theory.max_ratio,
        seed,
    })
}

/// Max-norm distance after sorting the first `k` and the last `m`
/// coordinates of both points; `F_k` is invariant under those permutations.
pub fn canonical_distance(cfg: &CevianConfig, a: &BarycentricPoint, b: &BarycentricPoint) -> f64 {
    let canon = |p: &BarycentricPoint| {
        let mut c = p.coords().to_vec();
        c[..cfg.k()].sort_by(f64::total_cmp);
        c[cfg.k()..].sort_by(f64::total_cmp);
        c
    };
    canon(a)
        .iter()
        .zip(canon(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
