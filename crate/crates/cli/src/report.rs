use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        Self { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// The output of one command. Everything except `timing` is a pure function
/// of the arguments and input files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub results: Value,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command.join(" ")).expect("string");
        for input in &self.inputs {
            writeln!(out, "input: {} (sha256 {})", input.path, input.sha256).expect("string");
        }
        writeln!(out, "status: {}", match self.status {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Error => "error",
        })
        .expect("string");
        if let Some(e) = &self.error {
            writeln!(out, "error: {e}").expect("string");
        }
        if !self.results.is_null() {
            out.push_str("results:");
            render(&mut out, &self.results, 1);
            out.push('\n');
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").expect("string");
        }
        if let Some(t) = &self.timing {
            writeln!(out, "elapsed: {:.3} ms", t.elapsed_ms).expect("string");
        }
        out
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) if s.contains('\n') => None,
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(is_scalar) => Some(serde_json::to_string(v).expect("json")),
        Value::Array(items) if items.iter().all(|i| matches!(i, Value::Array(xs) if xs.iter().all(is_scalar))) && items.len() <= 1 => {
            Some(serde_json::to_string(v).expect("json"))
        }
        Value::Object(map) if map.is_empty() => Some("{}".into()),
        v if is_scalar(v) => Some(v.to_string()),
        _ => None,
    }
}

/// Indented rendering: scalars and flat arrays on one line, nested values below.
fn render(out: &mut String, v: &Value, depth: usize) {
    if let Some(s) = inline(v) {
        write!(out, " {s}").expect("string");
        return;
    }
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                write!(out, "\n{pad}{k}:").expect("string");
                render(out, x, depth + 1);
            }
        }
        Value::Array(items) => {
            for x in items {
                write!(out, "\n{pad}-").expect("string");
                render(out, x, depth + 1);
            }
        }
        Value::String(s) => {
            for line in s.lines() {
                write!(out, "\n{pad}| {line}").expect("string");
            }
        }
        _ => unreachable!("other scalars render inline"),
    }
}
