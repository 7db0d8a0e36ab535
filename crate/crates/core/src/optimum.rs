//! The maximum of `(V_1 + ... + V_k) / V` over interior points.
//!
//! Along the symmetric family `λ_1 = ... = λ_k = x`,
//! `λ_{k+1} = ... = λ_{n+1} = (1 - kx) / m` the objective reduces to
//!
//! ```text
//! f(x) = k x^k / (1 - x)^(k-1) * ((1 - kx) / (m - 1 + kx))^m
//! ```
//!
//! whose derivative carries the cubic factor
//! `q(x) = (k - x)(1 - kx)(m - 1 + kx) - k m^2 x (1 - x)`. The maximizer is
//! the unique zero `θ` of `q` inside `(0, 1/k)`, isolated here with a
//! bracket whose endpoint signs are evaluated exactly.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::exact;
use crate::simplex::{BarycentricPoint, CevianConfig};

/// Default width of the final root bracket.
pub const DEFAULT_TOLERANCE: f64 = 1e-14;

/// Bound on the scaled residual `|q(theta)| / max |a_i|`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-13;

/// Bracket width at which bisection hands over to Newton steps.
const NEWTON_HANDOVER: f64 = 1e-4;

const MAX_ITERATIONS: usize = 400;

/// `f(x)` on `[0, 1/k]`; zero at both endpoints.
pub fn reduced_objective(x: f64, cfg: &CevianConfig) -> Result<f64> {
    let (k, m) = (cfg.k() as f64, cfg.m() as f64);
    let upper = 1.0 / k;
    if !(0.0..=upper).contains(&x) {
        return Err(Error::OutOfDomain {
            value: x,
            domain: format!("[0, 1/{}]", cfg.k()),
        });
    }
    if x == 0.0 || x == upper {
        return Ok(0.0);
    }
    let head = k * x.powi(cfg.k() as i32) / (1.0 - x).powi(cfg.k() as i32 - 1);
    let tail = ((1.0 - k * x) / (m - 1.0 + k * x)).powi(cfg.m() as i32);
    Ok(head * tail)
}

/// `f'(x) = k x^(k-1) / (1-x)^k * (1-kx)^(m-1) / (m-1+kx)^(m+1) * q(x)` on
/// the open interval `(0, 1/k)`.
pub fn reduced_derivative(x: f64, cfg: &CevianConfig) -> Result<f64> {
    let (k, m) = (cfg.k() as f64, cfg.m() as f64);
    if !(x > 0.0 && x < 1.0 / k) {
        return Err(Error::OutOfDomain {
            value: x,
            domain: format!("(0, 1/{})", cfg.k()),
        });
    }
    let (ki, mi) = (cfg.k() as i32, cfg.m() as i32);
    let prefactor = k * x.powi(ki - 1) / (1.0 - x).powi(ki) * (1.0 - k * x).powi(mi - 1)
        / (m - 1.0 + k * x).powi(mi + 1);
    Ok(prefactor * CubicPoly::for_config(cfg).eval_f64(x))
}

/// The integer cubic `q(x) = a3 x^3 + a2 x^2 + a1 x + a0` generated by `(k, m)`.
///
/// Defined for every `k, m >= 0`, wider than the range where the bound
/// holds, so that degenerate members can be inspected too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicPoly {
    pub k: u64,
    pub m: u64,
    pub a3: BigInt,
    pub a2: BigInt,
    pub a1: BigInt,
    pub a0: BigInt,
}

impl CubicPoly {
    pub fn new(k: u64, m: u64) -> Self {
        let (k_, m_) = (BigInt::from(k), BigInt::from(m));
        let k2 = &k_ * &k_;
        let m2 = &m_ * &m_;
        let a3 = k2.clone();
        let a2 = -&k_ * (&k2 - &m2 - &m_ + 2);
        let a1 = 2 * &k2 - &k2 * &m_ - &k_ * &m2 - &m_ + 1;
        let a0 = &k_ * (&m_ - 1);
        Self {
            k,
            m,
            a3,
            a2,
            a1,
            a0,
        }
    }

    pub fn for_config(cfg: &CevianConfig) -> Self {
        Self::new(cfg.k() as u64, cfg.m() as u64)
    }

    /// Coefficients from the leading one down: `[a3, a2, a1, a0]`.
    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a3, &self.a2, &self.a1, &self.a0]
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coefficients()
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Horner evaluation of the expanded form, exactly.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coefficients()
            .iter()
            .fold(BigRational::zero(), |acc, &c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// `(k - x)(1 - kx)(m - 1 + kx) - k m^2 x (1 - x)`, exactly.
    pub fn eval_factored_exact(&self, x: &BigRational) -> BigRational {
        let k = BigRational::from_integer(self.k.into());
        let m = BigRational::from_integer(self.m.into());
        let one = BigRational::from_integer(1.into());
        let kx = &k * x;
        (&k - x) * (&one - &kx) * (&m - &one + &kx) - &k * &m * &m * x * (&one - x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients()
            .iter()
            .fold(0.0, |acc, &c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative_f64(&self, x: f64) -> f64 {
        let [a3, a2, a1, _] = self.coefficients().map(|c| c.to_f64().unwrap_or(f64::NAN));
        (3.0 * a3 * x + 2.0 * a2) * x + a1
    }

    /// Exact `q(0)` and `q(1/k)`. For `1 < k < n` these are
    /// `k(m - 1) > 0` and `-m^2 (k - 1) / k < 0`.
    pub fn sign_facts(&self) -> Result<(BigRational, BigRational)> {
        if self.k == 0 {
            return Err(Error::OutOfDomain {
                value: 0.0,
                domain: "k >= 1 (q(1/k) needs 1/k)".into(),
            });
        }
        let at_zero = self.eval_exact(&BigRational::zero());
        let at_inv_k = self.eval_exact(&BigRational::new(1.into(), self.k.into()));
        Ok((at_zero, at_inv_k))
    }

    /// Real roots by the trigonometric (three-cosine) formula applied to the
    /// depressed cubic. Requires three real roots; sorted ascending.
    pub fn trigonometric_roots(&self) -> Result<[f64; 3]> {
        if self.a3.is_zero() {
            return Err(Error::InvalidArgument("leading coefficient is zero".into()));
        }
        let a = BigRational::from_integer(self.a3.clone());
        let b = BigRational::from_integer(self.a2.clone());
        let c = BigRational::from_integer(self.a1.clone());
        let d = BigRational::from_integer(self.a0.clone());
        // x = t - b / 3a turns q into a (t^3 + p t + r)
        let three = BigRational::from_integer(3.into());
        let p = (&three * &a * &c - &b * &b) / (&three * &a * &a);
        let r = (BigRational::from_integer(2.into()) * &b * &b * &b
            - BigRational::from_integer(9.into()) * &a * &b * &c
            + BigRational::from_integer(27.into()) * &a * &a * &d)
            / (BigRational::from_integer(27.into()) * &a * &a * &a);
        let shift = (&b / (&three * &a)).to_f64().unwrap_or(f64::NAN);
        let (p, r) = (
            p.to_f64().unwrap_or(f64::NAN),
            r.to_f64().unwrap_or(f64::NAN),
        );
        if p.is_nan() || p >= 0.0 {
            return Err(Error::Internal(format!(
                "depressed cubic has p = {p}; three real roots need p < 0"
            )));
        }
        let amplitude = 2.0 * (-p / 3.0).sqrt();
        let cos_arg = (3.0 * r / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = cos_arg.acos() / 3.0;
        let mut roots =
            [0, 1, 2].map(|j| amplitude * (phi - 2.0 * PI * j as f64 / 3.0).cos() - shift);
        roots.sort_by(f64::total_cmp);
        Ok(roots)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    NewtonBisection,
    Trigonometric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumResult {
    pub config: CevianConfig,
    pub cubic: CubicPoly,
    /// Zero of `q` in `(0, 1/k)` from the bracketing solver.
    pub theta: f64,
    /// The same zero from the trigonometric formula.
    pub theta_trigonometric: f64,
    pub max_ratio: f64,
    pub equality_point: BarycentricPoint,
    /// `|q(theta)|`, evaluated exactly at the float `theta`.
    pub q_at_theta: f64,
    /// `|q(theta)| / max |a_i|`, held to [`RESIDUAL_TOLERANCE`].
    pub residual: f64,
    /// Final interval with an exactly verified sign change of `q`.
    pub bracket: (f64, f64),
    pub method: SolveMethod,
}

/// Sign of `q` at the float `x`, evaluated exactly.
fn exact_sign(q: &CubicPoly, x: f64) -> i8 {
    let v = q.eval_exact(&exact(x));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Shrinks `[lo, hi]` (with `q(lo) > 0 > q(hi)`) around the zero until the
/// width is at most `tolerance`. Returns the bracket; collapses to a point
/// if an exact zero is hit.
fn isolate_root(q: &CubicPoly, mut lo: f64, mut hi: f64, tolerance: f64) -> Result<(f64, f64)> {
    // shrink toward x; true if the bracket became degenerate at an exact zero
    fn probe(q: &CubicPoly, x: f64, lo: &mut f64, hi: &mut f64) -> bool {
        if !(x > *lo && x < *hi) {
            return false;
        }
        match exact_sign(q, x) {
            1 => *lo = x,
            -1 => *hi = x,
            _ => {
                *lo = x;
                *hi = x;
                return true;
            }
        }
        false
    }

    let mut iterations = 0;
    while hi - lo > NEWTON_HANDOVER.max(tolerance) {
        let mid = 0.5 * (lo + hi);
        if probe(q, mid, &mut lo, &mut hi) {
            return Ok((lo, hi));
        }
        iterations += 1;
    }

    let mut x = 0.5 * (lo + hi);
    while hi - lo > tolerance {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::Internal(format!(
                "root isolation stalled at [{lo:e}, {hi:e}]"
            )));
        }
        let width = hi - lo;
        let slope = q.derivative_f64(x);
        let candidate = x - q.eval_f64(x) / slope;
        let newton_ok = slope != 0.0 && candidate.is_finite() && candidate > lo && candidate < hi;
        if newton_ok {
            x = candidate;
            // probes on both sides let the converging iterate close the bracket
            let delta = 0.25 * tolerance;
            for probe_at in [x - delta, x + delta] {
                if probe(q, probe_at, &mut lo, &mut hi) {
                    return Ok((lo, hi));
                }
            }
        }
        if hi - lo > 0.5 * width {
            // Newton made too little progress; fall back to bisection
            x = 0.5 * (lo + hi);
            if probe(q, x, &mut lo, &mut hi) {
                return Ok((lo, hi));
            }
        }
        if hi <= lo || next_up(lo) >= hi {
            break;
        }
    }
    Ok((lo, hi))
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// Solves for `θ`, the maximum ratio and the point attaining it.
pub fn solve_theta(cfg: &CevianConfig, tolerance: f64) -> Result<OptimumResult> {
    if tolerance.is_nan() || tolerance < 1e-15 {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tolerance:e} is below the supported minimum 1e-15"
        )));
    }
    let cubic = CubicPoly::for_config(cfg);
    let (at_zero, at_inv_k) = cubic.sign_facts()?;
    if !(at_zero.is_positive() && at_inv_k.is_negative()) {
        return Err(Error::Internal(format!(
            "q(0) = {at_zero}, q(1/k) = {at_inv_k} do not bracket a zero"
        )));
    }
    let k = cfg.k() as f64;
    let mut hi = 1.0 / k;
    // 1/k is rounded; step inward until the float endpoint keeps the exact sign
    while exact_sign(&cubic, hi) >= 0 {
        hi = f64::from_bits(hi.to_bits() - 1);
    }
    let bracket = isolate_root(&cubic, 0.0, hi, tolerance)?;
    let theta = 0.5 * (bracket.0 + bracket.1);
    let q_at_theta = cubic
        .eval_exact(&exact(theta))
        .abs()
        .to_f64()
        .unwrap_or(f64::NAN);
    let residual = q_at_theta / cubic.max_abs_coefficient();

    let upper = 1.0 / k;
    let theta_trigonometric = cubic
        .trigonometric_roots()?
        .into_iter()
        .find(|&r| r > 0.0 && r < upper)
        .ok_or_else(|| Error::Internal("no trigonometric root inside (0, 1/k)".into()))?;

    Ok(OptimumResult {
        config: *cfg,
        max_ratio: reduced_objective(theta, cfg)?,
        equality_point: equality_point(cfg, theta)?,
        cubic,
        theta,
        theta_trigonometric,
        q_at_theta,
        residual,
        bracket,
        method: SolveMethod::NewtonBisection,
    })
}

/// The symmetric point with the first `k` coordinates equal to `x` and the
/// remaining `m` equal to `(1 - kx) / m`.
pub fn equality_point(cfg: &CevianConfig, x: f64) -> Result<BarycentricPoint> {
    let y = (1.0 - cfg.k() as f64 * x) / cfg.m() as f64;
    let mut coords = vec![x; cfg.k()];
    coords.extend(std::iter::repeat_n(y, cfg.m()));
    BarycentricPoint::normalized(coords)
}

/// The tetrahedron (`k = m = 2`) zero in closed form:
/// `sqrt(3) * cos(atan(sqrt(23) / 2) / 3 + pi / 3)`.
pub fn tetrahedron_theta() -> f64 {
    3f64.sqrt() * ((23f64.sqrt() / 2.0).atan() / 3.0 + PI / 3.0).cos()
}

/// Simplified tetrahedron bound `2 θ^2 (1 - 2θ) / 3`. Agrees with
/// [`reduced_objective`] for `k = m = 2` only at the zero of `4x^3 - 9x + 2`.
pub fn tetrahedron_bound(theta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&theta) {
        return Err(Error::OutOfDomain {
            value: theta,
            domain: "[0, 1/2)".into(),
        });
    }
    Ok(2.0 * theta * theta * (1.0 - 2.0 * theta) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::partial_sum;

    const THETA0: f64 = 0.22745204561175;
    const MAX0: f64 = 0.018800151866697;

    fn cfg(n: usize, k: usize) -> CevianConfig {
        CevianConfig::new(n, k).unwrap()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cubic_coefficients() {
        let q = CubicPoly::new(2, 2);
        assert_eq!(
            (q.a3.clone(), q.a2.clone(), q.a1.clone(), q.a0.clone()),
            (int(4), int(0), int(-9), int(2))
        );
        let q = CubicPoly::new(1, 1);
        assert_eq!(
            (q.a3.clone(), q.a2.clone(), q.a1.clone(), q.a0.clone()),
            (int(1), int(-1), int(0), int(0))
        );
        let q = CubicPoly::new(3, 2);
        assert_eq!(
            (q.a3.clone(), q.a2.clone(), q.a1.clone(), q.a0.clone()),
            (int(9), int(-15), int(-13), int(3))
        );
    }

    #[test]
    fn expanded_equals_factored_at_rationals() {
        let q = CubicPoly::new(3, 2);
        for (n, d) in [
            (0, 1),
            (1, 3),
            (-7, 5),
            (22, 7),
            (1, 1000),
            (-3, 2),
            (5, 11),
            (9, 4),
            (2, 1),
            (-1, 9),
        ] {
            let x = rat(n, d);
            assert_eq!(q.eval_exact(&x), q.eval_factored_exact(&x));
        }
    }

    #[test]
    fn sign_facts_examples() {
        assert_eq!(
            CubicPoly::new(2, 2).sign_facts().unwrap(),
            (rat(2, 1), rat(-2, 1))
        );
        assert_eq!(
            CubicPoly::new(3, 2).sign_facts().unwrap(),
            (rat(3, 1), rat(-8, 3))
        );
        assert_eq!(
            CubicPoly::new(2, 4).sign_facts().unwrap(),
            (rat(6, 1), rat(-8, 1))
        );
        assert!(CubicPoly::new(0, 3).sign_facts().is_err());
    }

    #[test]
    fn objective_domain_and_endpoints() {
        let c = cfg(3, 2);
        assert_eq!(reduced_objective(0.0, &c).unwrap(), 0.0);
        assert_eq!(reduced_objective(0.5, &c).unwrap(), 0.0);
        assert!(reduced_objective(-0.1, &c).is_err());
        assert!(reduced_objective(0.6, &c).is_err());
        assert!(reduced_derivative(0.0, &c).is_err());
        assert!(reduced_derivative(0.5, &c).is_err());
        assert!((reduced_objective(THETA0, &c).unwrap() - MAX0).abs() < 1e-14);
    }

    #[test]
    fn objective_equals_partial_sum_at_centroid() {
        // n = 4, k = 2, x = 0.2 puts the second group at 0.2 too
        let c = cfg(4, 2);
        let p = BarycentricPoint::new(vec![0.2; 5]).unwrap();
        let direct = partial_sum(&p, &c).unwrap();
        let reduced = reduced_objective(0.2, &c).unwrap();
        assert!((direct - reduced).abs() <= 1e-12 * direct);
    }

    #[test]
    fn derivative_sign_and_stationarity() {
        let c = cfg(3, 2);
        assert!(reduced_derivative(0.1, &c).unwrap() > 0.0);
        assert!(reduced_derivative(0.4, &c).unwrap() < 0.0);
        assert!(reduced_derivative(THETA0, &c).unwrap().abs() < 1e-12);
    }

    #[test]
    fn solve_tetrahedron() {
        let r = solve_theta(&cfg(3, 2), DEFAULT_TOLERANCE).unwrap();
        assert!((r.theta - THETA0).abs() < 1e-13);
        assert!((r.max_ratio - MAX0).abs() < 1e-13);
        assert!((r.theta - r.theta_trigonometric).abs() < 1e-12);
        assert!((r.theta - tetrahedron_theta()).abs() < 1e-12);
        assert!(r.bracket.1 - r.bracket.0 <= DEFAULT_TOLERANCE);
        assert!(r.residual <= RESIDUAL_TOLERANCE);
        assert!(r.q_at_theta <= RESIDUAL_TOLERANCE * 9.0);
        let y = (1.0 - 2.0 * r.theta) / 2.0;
        let e = r.equality_point.coords();
        assert_eq!(e.len(), 4);
        assert!((e[0] - r.theta).abs() < 1e-15 && (e[1] - r.theta).abs() < 1e-15);
        assert!((e[2] - y).abs() < 1e-15 && (e[3] - y).abs() < 1e-15);
    }

    #[test]
    fn solver_rejects_tiny_tolerance() {
        assert!(matches!(
            solve_theta(&cfg(3, 2), 1e-16),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn bracket_signs_are_certified() {
        for c in CevianConfig::all_up_to(12) {
            let r = solve_theta(&c, DEFAULT_TOLERANCE).unwrap();
            let q = &r.cubic;
            let (lo, hi) = r.bracket;
            assert!(lo <= r.theta && r.theta <= hi);
            if lo < hi {
                assert_eq!(exact_sign(q, lo), 1, "{c:?}");
                assert_eq!(exact_sign(q, hi), -1, "{c:?}");
            }
            assert!(hi - lo <= DEFAULT_TOLERANCE, "{c:?}: {}", hi - lo);
        }
    }

    #[test]
    fn tetrahedron_bound_only_matches_at_root() {
        let c = cfg(3, 2);
        assert_eq!(tetrahedron_bound(0.0).unwrap(), 0.0);
        let at_root = tetrahedron_bound(THETA0).unwrap();
        assert!((at_root - MAX0).abs() < 1e-14);
        let general = reduced_objective(0.2, &c).unwrap();
        let simplified = tetrahedron_bound(0.2).unwrap();
        // 2 * 0.04 / 0.8 * (0.6 / 1.4)^2 versus 2 * 0.04 * 0.6 / 3
        assert!((general - 0.1 * (0.6f64 / 1.4).powi(2)).abs() < 1e-15);
        assert!((simplified - 0.016).abs() < 1e-15);
        assert!((general - simplified).abs() > 1e-3);
        assert!(tetrahedron_bound(0.5).is_err());
    }
}
