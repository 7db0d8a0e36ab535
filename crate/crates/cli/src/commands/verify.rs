use cevopt_core::oracle::{check_derivative, geometric_trials, maximize_direct};
use serde_json::json;

use super::{config, unsupported, Failure, Report};
use crate::output::{self, Envelope, Format};
use crate::VerifyArgs;

const DERIVATIVE_SAMPLES: usize = 100;

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

pub fn run(args: &VerifyArgs) -> Result<Report, Failure> {
    if args.format == Format::Csv {
        return Err(unsupported("verify", args.format));
    }
    let cfg = config(&args.config)?;
    if args.restarts == 0 || args.trials == 0 {
        return Err(Failure::Usage(
            "--restarts and --trials must be positive".into(),
        ));
    }
    let oracle = maximize_direct(&cfg, args.restarts, args.seed)?;
    let geometric = geometric_trials(cfg.n(), args.trials, args.seed)?;
    let derivative = check_derivative(&cfg, DERIVATIVE_SAMPLES, args.seed)?;

    let checks = [
        Check {
            name: "agreement_abs",
            value: oracle.agreement_abs,
            threshold: 1e-6,
        },
        Check {
            name: "argmax_distance",
            value: oracle.argmax_distance,
            threshold: 1e-4,
        },
        Check {
            name: "geometric_measured_rel",
            value: geometric.max_measured_rel,
            threshold: 1e-9,
        },
        Check {
            name: "geometric_determinant_rel",
            value: geometric.max_determinant_rel,
            threshold: 1e-12,
        },
        Check {
            name: "derivative_rel",
            value: derivative,
            threshold: 1e-5,
        },
    ];
    let verified = checks.iter().all(Check::passed);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();

    let stdout = match args.format {
        Format::Json => Envelope {
            command: "verify",
            inputs: json!({
                "n": cfg.n(),
                "k": cfg.k(),
                "restarts": args.restarts,
                "seed": args.seed,
                "trials": args.trials,
            }),
            results: json!({
                "oracle": oracle,
                "geometric": geometric,
                "derivative_max_rel": derivative,
                "passed": verified,
            }),
            diagnostics: json!({
                "checks": checks.iter().map(|c| json!({
                    "name": c.name,
                    "value": c.value,
                    "threshold": c.threshold,
                    "passed": c.passed(),
                })).collect::<Vec<_>>(),
                "failed": failed,
            }),
        }
        .to_json(),
        _ => {
            let mut s = format!(
                "n = {}, k = {}: best {} over {} restarts, theoretical {}\n",
                cfg.n(),
                cfg.k(),
                output::float(oracle.best_value),
                oracle.restarts,
                output::float(oracle.theoretical_max)
            );
            for c in &checks {
                let verdict = if c.passed() { "ok" } else { "FAILED" };
                s.push_str(&format!(
                    "{:<26} {:e} (<= {:e}) {verdict}\n",
                    c.name, c.value, c.threshold
                ));
            }
            s
        }
    };
    let mut report = Report::ok(stdout);
    if !verified {
        report.verified = false;
        report
            .stderr
            .push(format!("verification failed: {}", failed.join(", ")));
    }
    Ok(report)
}
