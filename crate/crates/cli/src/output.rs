use serde_json::Value;

use crate::{Failure, Format};

/// What a command produced, in every format it supports.
pub struct Report {
    pub passed: bool,
    pub default: Format,
    pub json: Value,
    pub rows: Vec<(String, String)>,
    pub dot: Option<String>,
}

impl Report {
    pub fn new(passed: bool, json: Value) -> Self {
        Report { passed, default: Format::Table, json, rows: Vec::new(), dot: None }
    }

    pub fn note(text: String) -> Self {
        Report::new(true, Value::String(text.clone())).row("", text)
    }

    pub fn row(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    pub fn with_default(mut self, format: Format) -> Self {
        self.default = format;
        self
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn render(&self, format: Option<Format>) -> Result<String, Failure> {
        match format.unwrap_or(self.default) {
            Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&self.json).expect("plain data"))),
            Format::Dot => {
                self.dot.clone().ok_or_else(|| Failure::Input("dot output is only available for `export hasse`".into()))
            }
            Format::Table => {
                let width = self.rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                let mut out = String::new();
                for (k, v) in &self.rows {
                    if k.is_empty() {
                        out.push_str(v);
                    } else {
                        out.push_str(&format!("{k:<width$}  {v}"));
                    }
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}
