//! Inline literals for functions and sequences.
//!
//! Functions: `constant:<v>`, `chi:<s>`, `steps:[v₁,…]` (uniform cells),
//! `steps:{"breakpoints":[…],"values":[…]}`, a bare JSON array (uniform
//! cells) or a JSON object. Sequences: `unit:<m>`, a JSON array or a JSON
//! object with `entries`. Values are numbers or `[re, im]` pairs. `@path`
//! reads any of these from a file.

use limfourier::kfunc::Element;
use limfourier::measure::{FiniteSequence, StepFunction};
use limfourier::{Complex64, Error, Result};
use serde_json::Value;

fn bad(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn resolve(lit: &str) -> Result<String> {
    match lit.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?.trim().to_string()),
        None => Ok(lit.trim().to_string()),
    }
}

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON input: {e}")))
}

fn number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(format!("not a number: {n}"))),
        Value::String(s) => limfourier::extreal::parse(s).ok_or_else(|| bad(format!("not a number: {s:?}"))),
        _ => Err(bad(format!("expected a number, got {v}"))),
    }
}

/// A JSON array of numbers or `[re, im]` pairs.
pub fn complex_values(v: &Value) -> Result<Vec<Complex64>> {
    let items = v.as_array().ok_or_else(|| bad("expected a JSON array of values"))?;
    items
        .iter()
        .map(|item| match item {
            Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(number(&pair[0])?, number(&pair[1])?)),
            other => Ok(Complex64::new(number(other)?, 0.0)),
        })
        .collect()
}

fn scalar(arg: &str, what: &str) -> Result<f64> {
    arg.trim()
        .parse()
        .map_err(|_| bad(format!("{what} needs a number, got {arg:?}")))
}

pub fn function(lit: &str) -> Result<StepFunction> {
    let text = resolve(lit)?;
    if let Some(v) = text.strip_prefix("constant:") {
        return Ok(StepFunction::constant(Complex64::new(scalar(v, "constant")?, 0.0)));
    }
    if let Some(s) = text.strip_prefix("chi:") {
        return StepFunction::characteristic(scalar(s, "chi")?);
    }
    let body = text.strip_prefix("steps:").unwrap_or(&text);
    let v = json(body)?;
    match &v {
        Value::Array(_) => StepFunction::uniform(complex_values(&v)?),
        Value::Object(map) if map.contains_key("function") => match serde_json::from_value::<Element>(v)? {
            Element::Function(f) => Ok(f),
            Element::Sequence(_) => Err(bad("expected a function")),
        },
        Value::Object(_) => Ok(serde_json::from_value(v)?),
        _ => Err(bad(format!("cannot read a function from {text:?}"))),
    }
}

pub fn sequence(lit: &str) -> Result<FiniteSequence> {
    let text = resolve(lit)?;
    if let Some(m) = text.strip_prefix("unit:") {
        let m: usize = m
            .trim()
            .parse()
            .map_err(|_| bad(format!("unit needs an index >= 1, got {m:?}")))?;
        if m == 0 {
            return Err(bad("unit vectors are indexed from 1"));
        }
        return Ok(FiniteSequence::unit(m));
    }
    let v = json(&text)?;
    match &v {
        Value::Array(_) => FiniteSequence::new(complex_values(&v)?),
        Value::Object(map) if map.contains_key("sequence") => match serde_json::from_value::<Element>(v)? {
            Element::Sequence(c) => Ok(c),
            Element::Function(_) => Err(bad("expected a sequence")),
        },
        Value::Object(_) => Ok(serde_json::from_value(v)?),
        _ => Err(bad(format!("cannot read a sequence from {text:?}"))),
    }
}

pub fn element(lit: &str, function_model: bool) -> Result<Element> {
    Ok(if function_model {
        function(lit)?.into()
    } else {
        sequence(lit)?.into()
    })
}
