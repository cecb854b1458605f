use std::fmt::Write as _;

use chainpoly::Polynomial;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Why a subcommand could not produce a successful report.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, malformed JSON, cap violations: exit 1.
    Input(String),
    /// Well-formed input that fails a mathematical property: exit 2.
    Math(String),
}

impl From<chainpoly::Error> for CliError {
    fn from(e: chainpoly::Error) -> Self {
        if e.is_mathematical_failure() {
            CliError::Math(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

/// A subcommand's payload. A report with `failure` set is still printed, then
/// the process exits with status 2.
pub struct Report {
    pub result: Value,
    pub failure: Option<String>,
}

impl Report {
    pub fn ok(result: Value) -> Self {
        Report { result, failure: None }
    }

    pub fn fail_if(result: Value, failed: bool, message: impl FnOnce() -> String) -> Self {
        Report { result, failure: failed.then(message) }
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize to JSON")
}

pub fn poly_text(p: &Polynomial) -> Value {
    Value::String(p.to_string())
}

/// Output of one run: what to print and the exit status.
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// `{"command", "result", "status", "version"}`; keys are sorted, so equal
/// inputs give byte-identical output.
pub fn envelope(command: &str, status: &str, result: Value) -> Value {
    json!({
        "command": command,
        "result": result,
        "status": status,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("JSON values print");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            flatten("", v, &mut out);
            out
        }
    }
}

/// One `path<TAB>value` line per leaf; `{"coeffs": [...]}` objects print as polynomials.
fn flatten(path: &str, v: &Value, out: &mut String) {
    if let Some(p) = as_polynomial(v) {
        let _ = writeln!(out, "{path}\t{p}");
        return;
    }
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&sub, x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{path}\t{s}");
        }
        other => {
            let _ = writeln!(out, "{path}\t{other}");
        }
    }
}

fn as_polynomial(v: &Value) -> Option<Polynomial> {
    let m: &Map<String, Value> = v.as_object()?;
    if m.len() != 1 || !m.contains_key("coeffs") {
        return None;
    }
    serde_json::from_value(v.clone()).ok()
}
