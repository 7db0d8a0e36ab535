use cevopt_core::optimum::{solve_theta, OptimumResult, DEFAULT_TOLERANCE};
use cevopt_core::CevianConfig;
use rayon::prelude::*;
use serde_json::json;

use super::{Failure, Report};
use crate::output::{self, Envelope, Format};
use crate::TableArgs;

const HEADER: [&str; 6] = ["n", "k", "m", "theta", "max_ratio", "residual"];

fn row(r: &OptimumResult) -> Vec<String> {
    vec![
        r.config.n().to_string(),
        r.config.k().to_string(),
        r.config.m().to_string(),
        output::float(r.theta),
        output::float(r.max_ratio),
        output::float(r.residual),
    ]
}

pub fn run(args: &TableArgs) -> Result<Report, Failure> {
    if args.n_max < 3 {
        return Err(Failure::Usage(format!(
            "--n-max must be at least 3, got {}",
            args.n_max
        )));
    }
    let results = CevianConfig::all_up_to(args.n_max)
        .par_iter()
        .map(|cfg| solve_theta(cfg, DEFAULT_TOLERANCE))
        .collect::<Result<Vec<_>, _>>()?;

    let stdout = match args.format {
        Format::Csv => output::csv(&HEADER, &results.iter().map(row).collect::<Vec<_>>()),
        Format::Json => Envelope {
            command: "table",
            inputs: json!({ "n_max": args.n_max }),
            results: json!({
                "rows": results.iter().map(|r| json!({
                    "n": r.config.n(),
                    "k": r.config.k(),
                    "m": r.config.m(),
                    "theta": r.theta,
                    "max_ratio": r.max_ratio,
                    "residual": r.residual,
                })).collect::<Vec<_>>(),
            }),
            diagnostics: json!({
                "max_residual": results.iter().map(|r| r.residual).fold(0.0, f64::max),
            }),
        }
        .to_json(),
        Format::Text => {
            let mut s = format!(
                "{:>3} {:>3} {:>3} {:>22} {:>24} {:>10}\n",
                "n", "k", "m", "theta", "max_ratio", "residual"
            );
            for r in &results {
                s.push_str(&format!(
                    "{:>3} {:>3} {:>3} {:>22} {:>24} {:>10.1e}\n",
                    r.config.n(),
                    r.config.k(),
                    r.config.m(),
                    output::float(r.theta),
                    output::float(r.max_ratio),
                    r.residual
                ));
            }
            s
        }
    };
    Ok(Report::ok(stdout))
}
