use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1.0.0";

/// Largest integer a JSON consumer can hold exactly in a double.
const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub relation: &'static str,
    pub threshold: Value,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value: json!(value),
            relation: "<=",
            threshold: json!(threshold),
            pass: value <= threshold,
        }
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value: json!(value),
            relation: ">=",
            threshold: json!(threshold),
            pass: value >= threshold,
        }
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value: json!(value),
            relation: "in",
            threshold: json!([lo, hi]),
            pass: (lo..=hi).contains(&value),
        }
    }

    pub fn equals(name: &str, value: u64, expected: u64) -> Self {
        Self {
            name: name.into(),
            value: count(value),
            relation: "==",
            threshold: count(expected),
            pass: value == expected,
        }
    }

    pub fn holds(name: &str, value: bool) -> Self {
        Self {
            name: name.into(),
            value: json!(value),
            relation: "==",
            threshold: json!(true),
            pass: value,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Envelope {
    pub fn new(command: &'static str, params: Value, results: Value, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            params,
            results,
            checks,
            pass,
        }
    }
}

/// Exact count as a JSON integer, or a decimal string past 2⁵³.
pub fn count(v: u64) -> Value {
    if v <= MAX_SAFE_INTEGER {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

/// Compact JSON with every float at 17 significant digits.
struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

pub fn render<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
