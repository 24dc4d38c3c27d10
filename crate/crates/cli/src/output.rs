//! Rendering of results as JSON or CSV.

use clap::ValueEnum;
use limfourier::measure::{FiniteSequence, StepFunction};
use limfourier::{Complex64, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Shortest representation that reads back to the same `f64`, which never
/// needs more than 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:?}")
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn scalar(v: f64) -> String {
    num(v) + "\n"
}

fn complex_rows(values: &[Complex64]) -> String {
    values
        .iter()
        .enumerate()
        .map(|(k, z)| format!("{},{},{}\n", k + 1, num(z.re), num(z.im)))
        .collect()
}

pub fn sequence(c: &FiniteSequence, fmt: Format) -> Result<String> {
    match fmt {
        Format::Json => json(c),
        Format::Csv => Ok(String::from("k,re,im\n") + &complex_rows(c.entries())),
    }
}

pub fn function(f: &StepFunction, fmt: Format) -> Result<String> {
    match fmt {
        Format::Json => json(f),
        Format::Csv => {
            let mut out = String::from("a,b,re,im\n");
            for (a, b, v) in f.cells() {
                out += &format!("{},{},{},{}\n", num(a), num(b), num(v.re), num(v.im));
            }
            Ok(out)
        }
    }
}

/// Rows of equal-length real columns.
pub fn table(header: &[&str], columns: &[&[f64]]) -> String {
    let mut out = header.join(",") + "\n";
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| num(c[i])).collect();
        out += &(row.join(",") + "\n");
    }
    out
}
