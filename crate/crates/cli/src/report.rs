//! Reports as a list of tagged records, rendered either as JSON lines or as
//! indented text. Both renderings walk the same records, so every number
//! printed in text also appears in the JSON.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    records: Vec<Value>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a record; `body` must serialize to a JSON object.
    pub fn push(&mut self, kind: &str, body: impl Serialize) {
        let mut map = match serde_json::to_value(body) {
            Ok(Value::Object(map)) => map,
            Ok(other) => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
            Err(e) => {
                let mut m = Map::new();
                m.insert("serialization_error".into(), Value::String(e.to_string()));
                m
            }
        };
        map.insert("record".into(), Value::String(kind.into()));
        self.records.push(Value::Object(map));
    }

    pub fn records(&self) -> &[Value] {
        &self.records
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Jsonl => self.jsonl(),
            Format::Text => self.text(),
        }
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records are plain JSON"));
            out.push('\n');
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let kind = r.get("record").and_then(Value::as_str).unwrap_or("record");
            let _ = writeln!(out, "[{kind}]");
            if let Value::Object(map) = r {
                for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "record") {
                    write_value(&mut out, k, v, 1);
                }
            }
        }
        out
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) if !map.is_empty() => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                write_value(out, k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, item) in items.iter().enumerate() {
                write_value(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => sig12(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => "{}".into(),
    }
}

/// `x` rounded to 12 significant digits, plain decimal for moderate
/// magnitudes and scientific otherwise.
pub fn sig12(x: f64) -> String {
    sig_digits(x, 12)
}

/// 17 significant digits: enough to recover every f64 exactly.
pub fn sig17(x: f64) -> String {
    sig_digits(x, 17)
}

fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..16).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(2.0), "2");
        assert_eq!(sig12(2f64.sqrt()), "1.41421356237");
        assert_eq!(sig12(-0.000123456789012345), "-0.000123456789012");
        assert_eq!(sig12(1.5e-9), "1.5e-9");
        assert_eq!(sig12(f64::INFINITY), "inf");
        assert_eq!(sig17(2f64.sqrt()), "1.4142135623730951");
        for x in [2f64.sqrt(), 1e-300, -7.25e18, 0.1, 1.0 / 3.0, 123456.789] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn text_and_json_share_values() {
        let mut r = Report::new();
        r.push(
            "demo",
            serde_json::json!({"phi": 2.0000000000000004, "name": "x", "list": [1.5, 2.5]}),
        );
        let json = r.jsonl();
        assert!(json.starts_with('{') && json.contains("\"record\":\"demo\""));
        let text = r.text();
        assert!(
            text.contains("phi: 2\n") && text.contains("list: [1.5, 2.5]"),
            "{text}"
        );
    }
}
