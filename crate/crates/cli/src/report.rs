//! Run reports and their deterministic JSON rendering.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A real with 17 significant digits in the shortest of fixed or
/// exponential notation, trailing zeros dropped (as `%.17g`).
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let trim = |s: &str| s.trim_end_matches('0').to_string();
    if !(-5..17).contains(&exp) {
        let rest = trim(&digits[1..]);
        let dot = if rest.is_empty() { String::new() } else { format!(".{rest}") };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{}{dot}e{esign}{:02}", &digits[..1], exp.abs());
    }
    if exp >= 0 {
        let split = exp as usize + 1;
        let frac = trim(&digits[split..]);
        let dot = if frac.is_empty() { String::new() } else { format!(".{frac}") };
        format!("{sign}{}{dot}", &digits[..split])
    } else {
        format!("{sign}0.{}{}", "0".repeat((-exp - 1) as usize), trim(&digits))
    }
}

/// Pretty JSON with sorted keys and [`format_real`] numbers.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => out.push_str(&u.to_string()),
            (_, Some(i), _) => out.push_str(&i.to_string()),
            (_, _, Some(f)) => out.push_str(&format_real(f)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_json(&map[*key], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// `path = value` lines for the plain-text mode.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, "", &mut out);
    out
}

fn write_text(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for key in keys {
                let sub = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                write_text(&map[key], &sub, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{path} = [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                write_text(item, &format!("{path}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{path} = {}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_u64() && !n.is_i64() => format_real(f),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

pub struct RunReport {
    pub command: Value,
    pub scene_path: String,
    pub scene_sha256: String,
    pub results: Value,
    pub warnings: Vec<String>,
    pub exit_code: u8,
    pub error: Option<(String, String)>,
}

impl RunReport {
    pub fn to_value(&self) -> Value {
        let mut status = Map::new();
        status.insert("exit_code".into(), Value::from(self.exit_code));
        status.insert(
            "error".into(),
            match &self.error {
                None => Value::Null,
                Some((kind, message)) => {
                    let mut e = Map::new();
                    e.insert("kind".into(), Value::from(kind.as_str()));
                    e.insert("message".into(), Value::from(message.as_str()));
                    Value::Object(e)
                }
            },
        );
        let mut scene = Map::new();
        scene.insert("path".into(), Value::from(self.scene_path.as_str()));
        scene.insert("sha256".into(), Value::from(self.scene_sha256.as_str()));
        let mut root = Map::new();
        root.insert("command".into(), self.command.clone());
        root.insert("scene".into(), Value::Object(scene));
        root.insert("results".into(), self.results.clone());
        root.insert("warnings".into(), Value::from(self.warnings.clone()));
        root.insert("status".into(), Value::Object(status));
        Value::Object(root)
    }
}
