use serde::Serialize;
use serde_json::Value;

/// Computation failure, printed as JSON on stdout with exit code 1.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Failure {
    pub fn new(kind: &'static str, e: impl std::fmt::Display) -> Self {
        Self::msg(kind, e.to_string())
    }

    pub fn msg(kind: &'static str, message: String) -> Self {
        Self {
            error: kind,
            message,
            detail: None,
        }
    }
}

pub mod csv_line {
    /// Quotes a field when it contains a comma or a quote.
    pub fn quote(s: &str) -> String {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    }

    /// `x` followed by `values`, in shortest round-trip form.
    pub fn floats(x: f64, values: &[f64]) -> String {
        std::iter::once(x)
            .chain(values.iter().copied())
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}
