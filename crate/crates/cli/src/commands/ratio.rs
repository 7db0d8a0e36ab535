use std::fmt::Write as _;

use cevopt_core::simplex::{full_sum, volume_ratio_determinant, volume_ratio_product};
use cevopt_core::{BarycentricPoint, Scalar};
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{unsupported, Failure, Report};
use crate::output::{self, Envelope, Format};
use crate::RatioArgs;

enum Coordinates {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

fn parse_rational(token: &str) -> Option<BigRational> {
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let ok = match token.split_once('/') {
        Some((p, r)) => valid(p) && valid(r),
        None => valid(token),
    };
    if !ok {
        return None;
    }
    token.parse().ok()
}

fn parse_lambda(raw: &str) -> Result<Coordinates, Failure> {
    let tokens: Vec<&str> = raw.split(',').map(str::trim).collect();
    let exact: Option<Vec<BigRational>> = tokens.iter().map(|t| parse_rational(t)).collect();
    if let Some(coords) = exact {
        return Ok(Coordinates::Exact(coords));
    }
    tokens
        .iter()
        .map(|t| {
            let value = match parse_rational(t) {
                Some(q) => Scalar::to_f64(&q),
                None => t.parse::<f64>().unwrap_or(f64::NAN),
            };
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Failure::Usage(format!("cannot parse coordinate {t:?}")))
            }
        })
        .collect::<Result<_, _>>()
        .map(Coordinates::Float)
}

/// A value as JSON and as text.
type Rendered = (Value, String);

struct Entry {
    index: usize,
    product: Value,
    determinant: Value,
    discrepancy: Value,
    text: String,
}

fn entries<S: Scalar>(
    coords: Vec<S>,
    indices: &[usize],
    render: impl Fn(&S) -> Rendered,
) -> Result<(Vec<Value>, Vec<Entry>, Rendered), Failure> {
    let p = BarycentricPoint::normalized(coords)?;
    let mut out = Vec::new();
    for &i in indices {
        let product = volume_ratio_product(&p, i)?;
        let determinant = volume_ratio_determinant(&p, i)?;
        let discrepancy = (product.clone() - determinant.clone()).abs();
        let (pj, pt) = render(&product);
        let (dj, dt) = render(&determinant);
        let (ej, et) = render(&discrepancy);
        out.push(Entry {
            index: i + 1,
            product: pj,
            determinant: dj,
            discrepancy: ej,
            text: format!(
                "V_{}/V  product {pt}  determinant {dt}  discrepancy {et}",
                i + 1
            ),
        });
    }
    let point = p.coords().iter().map(|x| render(x).0).collect();
    Ok((point, out, render(&full_sum(&p)?)))
}

pub fn run(args: &RatioArgs) -> Result<Report, Failure> {
    if args.format == Format::Csv {
        return Err(unsupported("ratio", args.format));
    }
    let coords = parse_lambda(&args.lambda)?;
    let len = match &coords {
        Coordinates::Exact(c) => c.len(),
        Coordinates::Float(c) => c.len(),
    };
    let indices: Vec<usize> = match args.index {
        Some(i) if (1..=len).contains(&i) => vec![i - 1],
        Some(i) => {
            return Err(Failure::Usage(format!("--index {i} outside 1..={len}")));
        }
        None => (0..len).collect(),
    };
    let (mode, (point, list, full)) = match coords {
        Coordinates::Exact(c) => (
            "exact",
            entries(c, &indices, |x| {
                let s = output::rational(x);
                (json!(s), s)
            })?,
        ),
        Coordinates::Float(c) => (
            "float",
            entries(c, &indices, |x| (json!(x), output::float(*x)))?,
        ),
    };

    let stdout = match args.format {
        Format::Json => Envelope {
            command: "ratio",
            inputs: json!({
                "lambda": args.lambda,
                "indices": indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            }),
            results: json!({
                "mode": mode,
                "point": point,
                "ratios": list.iter().map(|e| json!({
                    "index": e.index,
                    "product": e.product,
                    "determinant": e.determinant,
                    "discrepancy": e.discrepancy,
                })).collect::<Vec<_>>(),
                "full_sum": full.0,
            }),
            diagnostics: json!({}),
        }
        .to_json(),
        _ => {
            let mut s = format!("mode {mode}\n");
            for e in &list {
                writeln!(s, "{}", e.text).unwrap();
            }
            writeln!(s, "full sum {}", full.1).unwrap();
            s
        }
    };
    Ok(Report::ok(stdout))
}
