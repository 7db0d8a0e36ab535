use cevopt_core::search::{search_grid, search_grid_with_checkpoint, Hit};
use cevopt_core::Error;
use serde_json::{json, Value};

use super::{unsupported, Failure, Report};
use crate::output::{self, Envelope, Format};
use crate::SearchArgs;

fn hit_json(h: &Hit) -> Value {
    json!({
        "k": h.k,
        "m": h.m,
        "zero": output::rational(&h.zero),
        "in_interval": h.in_interval,
    })
}

pub fn run(args: &SearchArgs) -> Result<Report, Failure> {
    if args.format == Format::Csv {
        return Err(unsupported("search", args.format));
    }
    let report = match &args.checkpoint {
        Some(path) => {
            search_grid_with_checkpoint(args.k_max, args.m_max, path).map_err(|e| match e {
                Error::Io(io) => Failure::Io(format!("checkpoint {}: {io}", path.display())),
                e => e.into(),
            })?
        }
        None => search_grid(args.k_max, args.m_max)?,
    };
    let (open, settled): (Vec<&Hit>, Vec<&Hit>) =
        report.hits.iter().partition(|h| h.is_open_question());
    let aborted: Vec<Value> = report.aborted().map(|c| json!([c.k, c.m])).collect();

    let stdout = match args.format {
        Format::Json => Envelope {
            command: "search",
            inputs: json!({ "k_max": args.k_max, "m_max": args.m_max }),
            results: json!({
                "cells": report.cells.iter().map(|c| json!({
                    "k": c.k,
                    "m": c.m,
                    "status": c.status.as_str(),
                    "zeros": c.zeros.iter().map(output::rational).collect::<Vec<_>>(),
                    "candidates_tested": c.candidates_tested,
                })).collect::<Vec<_>>(),
                "hits": settled.iter().map(|h| hit_json(h)).collect::<Vec<_>>(),
                "open_question_hits": open.iter().map(|h| hit_json(h)).collect::<Vec<_>>(),
                "candidates_tested": report.candidates_tested,
            }),
            diagnostics: json!({ "aborted_cells": aborted }),
        }
        .to_json(),
        _ => {
            let mut s = format!(
                "grid 0..={} x 0..={}: {} cells, {} candidates tested\n",
                report.k_max,
                report.m_max,
                report.cells.len(),
                report.candidates_tested
            );
            s.push_str(&format!("{} hits with k <= 1 or m <= 1\n", settled.len()));
            s.push_str(&format!("{} hits with k > 1 and m > 1\n", open.len()));
            for h in &open {
                s.push_str(&format!(
                    "  k = {}, m = {}: {}\n",
                    h.k,
                    h.m,
                    output::rational(&h.zero)
                ));
            }
            if !aborted.is_empty() {
                s.push_str(&format!(
                    "{} cells aborted at the candidate limit\n",
                    aborted.len()
                ));
            }
            s
        }
    };
    let mut out = Report::ok(stdout);
    out.stderr.push(format!(
        "search took {:.3} s",
        report.duration.as_secs_f64()
    ));
    Ok(out)
}
