use cevopt_core::optimum::{solve_theta, tetrahedron_bound, tetrahedron_theta, RESIDUAL_TOLERANCE};
use serde_json::{json, Value};

use super::{config, Failure, Report};
use crate::output::{self, Envelope, Format};
use crate::OptimumArgs;

pub fn run(args: &OptimumArgs) -> Result<Report, Failure> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Failure::Usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }
    let cfg = config(&args.config)?;
    let r = solve_theta(&cfg, args.tol)?;
    let (at_zero, at_inv_k) = r.cubic.sign_facts()?;
    let q: Vec<Value> = r
        .cubic
        .coefficients()
        .iter()
        .map(|c| output::integer(c))
        .collect();
    let closed = if cfg.k() == 2 && cfg.m() == 2 {
        let theta = tetrahedron_theta();
        Some((theta, tetrahedron_bound(theta)?))
    } else {
        None
    };

    let stdout = match args.format {
        Format::Json => {
            let mut results = json!({
                "theta": r.theta,
                "theta_trigonometric": r.theta_trigonometric,
                "max_ratio": r.max_ratio,
                "equality_point": r.equality_point.coords(),
                "q": q,
                "q_at_zero": output::rational(&at_zero),
                "q_at_inverse_k": output::rational(&at_inv_k),
                "residual": r.residual,
                "q_at_theta": r.q_at_theta,
                "bracket": [r.bracket.0, r.bracket.1],
                "method": r.method,
            });
            if let Some((theta, max)) = closed {
                results["closed_form"] = json!({ "theta": theta, "max_ratio": max });
            }
            Envelope {
                command: "optimum",
                inputs: json!({ "n": cfg.n(), "k": cfg.k(), "m": cfg.m(), "tol": args.tol }),
                results,
                diagnostics: json!({
                    "residual_tolerance": RESIDUAL_TOLERANCE,
                    "theta_method_gap": (r.theta - r.theta_trigonometric).abs(),
                    "bracket_width": r.bracket.1 - r.bracket.0,
                }),
            }
            .to_json()
        }
        Format::Csv => output::csv(
            &[
                "n",
                "k",
                "m",
                "theta",
                "theta_trigonometric",
                "max_ratio",
                "residual",
            ],
            &[vec![
                cfg.n().to_string(),
                cfg.k().to_string(),
                cfg.m().to_string(),
                output::float(r.theta),
                output::float(r.theta_trigonometric),
                output::float(r.max_ratio),
                output::float(r.residual),
            ]],
        ),
        Format::Text => {
            let mut lines = vec![
                format!("n = {}, k = {}, m = {}", cfg.n(), cfg.k(), cfg.m()),
                format!("q(x) = {}", output::cubic(r.cubic.coefficients())),
                format!(
                    "q(0) = {}, q(1/k) = {}",
                    output::rational(&at_zero),
                    output::rational(&at_inv_k)
                ),
                format!("theta = {}", output::float(r.theta)),
                format!(
                    "theta (trigonometric) = {}",
                    output::float(r.theta_trigonometric)
                ),
                format!("max ratio = {}", output::float(r.max_ratio)),
                format!(
                    "equality point = {}",
                    output::tuple(r.equality_point.coords())
                ),
                format!(
                    "residual = {:e} (|q(theta)| = {:e}, tolerance {:e})",
                    r.residual, r.q_at_theta, RESIDUAL_TOLERANCE
                ),
            ];
            if let Some((theta, max)) = closed {
                lines.push(format!(
                    "closed form theta = {}, max = {}",
                    output::float(theta),
                    output::float(max)
                ));
            }
            let mut s = lines.join("\n");
            s.push('\n');
            s
        }
    };
    Ok(Report::ok(stdout))
}
