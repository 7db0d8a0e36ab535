use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Structured result of one command.
pub struct Envelope {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Value,
}

impl Envelope {
    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("values are serializable");
        s.push('\n');
        s
    }
}

/// `p/r` in lowest terms.
pub fn rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Integer as a JSON number when it fits `i64`, otherwise as a string.
pub fn integer(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Shortest round-trip decimal, with an exponent for very small or large
/// magnitudes; the same rendering JSON output uses.
pub fn float(x: f64) -> String {
    json!(x).to_string()
}

pub fn tuple(xs: &[f64]) -> String {
    let mut s = String::from("(");
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&float(*x));
    }
    s.push(')');
    s
}

/// `4 x^3 - 9 x + 2`, skipping zero terms.
pub fn cubic(coefficients: [&BigInt; 4]) -> String {
    let mut s = String::new();
    for (c, power) in coefficients.into_iter().zip([" x^3", " x^2", " x", ""]) {
        if c.sign() == Sign::NoSign {
            continue;
        }
        if s.is_empty() {
            write!(s, "{c}{power}").unwrap();
        } else if c.sign() == Sign::Minus {
            write!(s, " - {}{power}", c.magnitude()).unwrap();
        } else {
            write!(s, " + {c}{power}").unwrap();
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
