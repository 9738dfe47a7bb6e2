//! Run reports: one record per invocation, rendered as JSON or text from the
//! same data.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use mirrorlat::ErrorKind;

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub kind: ErrorKind,
    pub message: String,
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Input => 1,
            ErrorKind::Domain => 2,
            ErrorKind::Internal => 3,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            ErrorKind::Input => "input",
            ErrorKind::Domain => "domain",
            ErrorKind::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    /// Hex SHA-256 of the canonical JSON of all inputs read.
    pub inputs_digest: String,
    pub outputs: Map<String, Value>,
    pub checks: Vec<CheckLine>,
    pub error: Option<Failure>,
    pub wall_time: f64,
}

pub fn digest(inputs: &Value) -> String {
    // serde_json maps are ordered, so this text is canonical
    let text = serde_json::to_string(inputs).expect("values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Pretty JSON with arrays of scalars kept on one line, so matrices read
/// row by row.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push_str(&serde_json::to_string(v).expect("values serialize").replace(',', ", "));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

impl RunReport {
    pub fn exit_code(&self) -> u8 {
        match &self.error {
            Some(f) => f.exit_code(),
            None if self.checks.iter().all(|c| c.passed) => 0,
            None => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "message": c.message }))
            .collect();
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs_digest".into(), json!(self.inputs_digest));
        m.insert("outputs".into(), Value::Object(self.outputs.clone()));
        m.insert("checks".into(), Value::Array(checks));
        m.insert("checks_passed".into(), json!(passed));
        m.insert("checks_failed".into(), json!(self.checks.len() - passed));
        m.insert("exit_code".into(), json!(self.exit_code()));
        if let Some(f) = &self.error {
            m.insert("error".into(), json!({ "kind": f.kind_name(), "message": f.message }));
        }
        m.insert("wall_time_s".into(), json!(self.wall_time));
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command).unwrap();
        writeln!(s, "inputs sha256: {}", self.inputs_digest).unwrap();
        for (k, v) in &self.outputs {
            let shown = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            writeln!(s, "{k}: {shown}").unwrap();
        }
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "[{status}] {}: {}", c.name, c.message).unwrap();
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(s, "checks: {passed} passed, {} failed", self.checks.len() - passed).unwrap();
        if let Some(f) = &self.error {
            writeln!(s, "error ({}): {}", f.kind_name(), f.message).unwrap();
        }
        writeln!(s, "exit code: {}", self.exit_code()).unwrap();
        writeln!(s, "wall time: {:.6} s", self.wall_time).unwrap();
        s
    }
}
