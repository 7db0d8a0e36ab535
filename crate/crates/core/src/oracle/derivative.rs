use rand::Rng;

use super::restart_rng;
use crate::error::Result;
use crate::optimum::{reduced_derivative, reduced_objective};
use crate::simplex::CevianConfig;

/// Derivatives smaller than this are compared in absolute terms.
pub const DERIVATIVE_FLOOR: f64 = 1e-8;

/// Central difference of the reduced objective with step `1e-6 / k`.
pub fn central_difference(x: f64, cfg: &CevianConfig) -> Result<f64> {
    let h = 1e-6 / cfg.k() as f64;
    Ok((reduced_objective(x + h, cfg)? - reduced_objective(x - h, cfg)?) / (2.0 * h))
}

/// Worst relative error between the factored derivative and central
/// differences at `samples` random points of `(0.05/k, 0.95/k)`.
pub fn check_derivative(cfg: &CevianConfig, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = restart_rng(seed, 0);
    let k = cfg.k() as f64;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = rng.gen_range(0.05 / k..0.95 / k);
        let analytic = reduced_derivative(x, cfg)?;
        let numeric = central_difference(x, cfg)?;
        let err = (analytic - numeric).abs() / analytic.abs().max(DERIVATIVE_FLOOR);
        worst = worst.max(err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimum::{solve_theta, DEFAULT_TOLERANCE};

    #[test]
    fn factored_derivative_matches_differences() {
        for (n, k) in [(3, 2), (6, 4), (4, 3)] {
            let cfg = CevianConfig::new(n, k).unwrap();
            let worst = check_derivative(&cfg, 100, 11).unwrap();
            assert!(worst <= 1e-5, "n={n} k={k}: {worst:e}");
        }
    }

    #[test]
    fn k3_m2_single_point() {
        let cfg = CevianConfig::new(4, 3).unwrap();
        let a = reduced_derivative(0.05, &cfg).unwrap();
        let d = central_difference(0.05, &cfg).unwrap();
        assert!((a - d).abs() <= 1e-5 * a.abs());
    }

    #[test]
    fn derivative_vanishes_at_root() {
        let cfg = CevianConfig::new(3, 2).unwrap();
        let theta = solve_theta(&cfg, DEFAULT_TOLERANCE).unwrap().theta;
        assert!(reduced_derivative(theta, &cfg).unwrap().abs() <= 1e-8);
        assert!(central_difference(theta, &cfg).unwrap().abs() <= 1e-8);
    }
}
