//! On-disk formats for every pipeline artifact.

pub mod graph;
pub mod model;
pub mod sparse;
pub mod span;
pub mod summary;
pub mod vocab;

use std::collections::BTreeSet;
use std::path::Path;

use serde_json::Value;

use semspan_core::text::parse_stopwords;

use crate::error::Result;

/// Stopword file: one term per line, `#` comments allowed.
pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    Ok(parse_stopwords(&crate::read_string(path)?))
}

/// JSON has no infinities; non-finite values become the strings `"inf"`,
/// `"-inf"` or `"nan"`.
pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(nonfinite(x).into()), Value::Number)
}

pub fn parse_json_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

pub fn csv_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        nonfinite(x).into()
    }
}

fn nonfinite(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: serde::Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}
