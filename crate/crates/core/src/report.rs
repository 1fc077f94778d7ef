//! Flat `key = value` reports with deterministic ordering.
//!
//! Values are rendered with Rust's shortest round-trip float formatting, so
//! identical inputs produce byte-identical text.

use std::fmt::Display;

#[derive(Debug, Default, Clone)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.lines.push((key.to_string(), format_f64(value)));
    }

    pub fn push_slice_f64(&mut self, key: &str, values: &[f64]) {
        let joined = values.iter().map(|&x| format_f64(x)).collect::<Vec<_>>().join(" ");
        self.lines.push((key.to_string(), joined));
    }

    pub fn push_slice(&mut self, key: &str, values: &[usize]) {
        let joined = values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        self.lines.push((key.to_string(), joined));
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn lines(&self) -> impl Iterator<Item = (&str, &str)> {
        self.lines.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

/// Shortest representation that parses back to the same f64.
pub fn format_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{}", x)
    }
}
