use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;
use crate::CliError;

/// What a command produced, before formatting.
pub struct Report {
    pub command: &'static str,
    pub seed: Option<u64>,
    pub result: Value,
    /// Available only for tabular commands.
    pub csv: Option<String>,
    pub ok: bool,
    pub failure: Option<String>,
}

pub struct Outcome {
    pub text: String,
    pub ok: bool,
    pub failure: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, result: impl Serialize) -> Result<Self, CliError> {
        let result = serde_json::to_value(result).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self { command, seed: None, result, csv: None, ok: true, failure: None })
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn fail_if(mut self, failed: bool, why: impl Into<String>) -> Self {
        if failed {
            self.ok = false;
            self.failure = Some(why.into());
        }
        self
    }

    pub fn render(self, format: Format) -> Result<Outcome, CliError> {
        let text = match format {
            Format::Json => {
                let mut env = json!({ "schema": 1, "command": self.command });
                if let Some(s) = self.seed {
                    env["seed"] = json!(s);
                }
                env["ok"] = json!(self.ok);
                env["result"] = self.result;
                serde_json::to_string_pretty(&env).expect("json") + "\n"
            }
            Format::Csv => self
                .csv
                .ok_or_else(|| CliError::Usage(format!("csv output is not available for `{}`", self.command)))?,
            Format::Text => {
                let mut lines = Vec::new();
                flatten("", &self.result, &mut lines);
                lines.push(format!("ok: {}", self.ok));
                lines.join("\n") + "\n"
            }
        };
        Ok(Outcome { text, ok: self.ok, failure: self.failure })
    }
}

/// `a.b[2].c: value` lines.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push(format!("{prefix}: [{}]", items.join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}: {}", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
