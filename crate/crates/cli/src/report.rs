//! Per-input reports and their text and JSON-lines renderings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// Output format of the reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

/// Outcome of one command on one input.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    /// Named results in display order.
    pub results: Vec<(String, Value)>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<String>) -> Self {
        Self { command: command.to_string(), inputs, ..Self::default() }
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.results.push((key.to_string(), value.into()));
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    pub fn to_json(&self) -> Value {
        let results: Map<String, Value> = self.results.iter().cloned().collect();
        let mut v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": results,
            "warnings": self.warnings,
        });
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => format!("{}\n", self.to_json()),
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let header = if self.inputs.is_empty() { self.command.clone() } else { self.inputs.join(" ") };
        writeln!(s, "== {}: {header}", self.command).unwrap();
        for (k, v) in &self.results {
            match v {
                Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
                    let parts: Vec<String> = items.iter().map(scalar).collect();
                    writeln!(s, "{k}: {}", parts.join(", ")).unwrap();
                }
                Value::Array(items) => {
                    writeln!(s, "{k}: {}", items.len()).unwrap();
                    for i in items {
                        writeln!(s, "  {}", scalar(i)).unwrap();
                    }
                }
                _ => writeln!(s, "{k}: {}", scalar(v)).unwrap(),
            }
        }
        for w in &self.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
        if let Some(e) = &self.error {
            writeln!(s, "error: {e}").unwrap();
        }
        s
    }
}

/// Strings without quotes, objects as `key=value` pairs, the rest as JSON.
fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
