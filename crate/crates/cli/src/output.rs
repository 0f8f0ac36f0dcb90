//! JSON emission: sorted keys, exact strings, optional decimal rendering.

use serde_json::{Map, Value};
use tiltwall_core::numeric::to_decimal;
use tiltwall_core::{parse_rational, Surd};

/// Serializes `v` with sorted keys and a trailing newline.
pub fn render(v: &Value, decimal: Option<usize>) -> String {
    let v = match decimal {
        Some(p) => to_decimal_tree(v, p),
        None => v.clone(),
    };
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}

fn is_exact_literal(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.is_empty() && body.chars().all(|c| c.is_ascii_digit() || c == '/')
}

fn surd_of(map: &Map<String, Value>) -> Option<Surd> {
    if map.len() != 3 {
        return None;
    }
    let get = |k: &str| map.get(k)?.as_str().and_then(|s| parse_rational(s).ok());
    Surd::new(get("a")?, get("b")?, get("d")?).ok()
}

/// Replaces exact `"p/q"` strings and `{a, b, d}` surds by fixed-point strings.
fn to_decimal_tree(v: &Value, p: usize) -> Value {
    match v {
        Value::String(s) if is_exact_literal(s) => match parse_rational(s) {
            Ok(r) => Value::String(to_decimal(&r, p)),
            Err(_) => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(|x| to_decimal_tree(x, p)).collect()),
        Value::Object(m) => match surd_of(m) {
            Some(s) => Value::String(s.to_decimal(p)),
            None => Value::Object(
                m.iter()
                    .map(|(k, x)| (k.clone(), to_decimal_tree(x, p)))
                    .collect(),
            ),
        },
        _ => v.clone(),
    }
}
