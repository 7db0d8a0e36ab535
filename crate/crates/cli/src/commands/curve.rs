use cevopt_core::optimum::{reduced_derivative, reduced_objective};
use cevopt_core::CubicPoly;

use super::{config, Failure, Report};
use crate::output;
use crate::CurveArgs;

/// Midpoints of `samples` equal cells of `(0, 1/k)`, so both ends stay open.
pub fn run(args: &CurveArgs) -> Result<Report, Failure> {
    let cfg = config(&args.config)?;
    if args.samples < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {}",
            args.samples
        )));
    }
    let q = CubicPoly::for_config(&cfg);
    let width = (args.samples * cfg.k()) as f64;
    let rows = (0..args.samples)
        .map(|j| {
            let x = (j as f64 + 0.5) / width;
            Ok(vec![
                output::float(x),
                output::float(reduced_objective(x, &cfg)?),
                output::float(reduced_derivative(x, &cfg)?),
                output::float(q.eval_f64(x)),
            ])
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Report::ok(output::csv(&["x", "f", "fprime", "q"], &rows)))
}
