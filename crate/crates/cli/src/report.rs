//! Output envelope shared by every subcommand.

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Completed = 0,
    Invalid = 2,
    Exhausted = 3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: String,
    pub witnesses: Value,
    /// Reals as 12-significant-digit strings.
    pub ratios: Map<String, Value>,
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

impl Envelope {
    pub fn new(command: &str, inputs: Map<String, Value>) -> Self {
        Envelope {
            command: command.into(),
            inputs,
            verdict: String::new(),
            witnesses: Value::Null,
            ratios: Map::new(),
            timing: None,
        }
    }

    pub fn ratio(&mut self, name: &str, x: f64) {
        self.ratios.insert(name.into(), Value::String(dilations::textual::sig12(x)));
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Flattens the envelope to `field,value` rows with dotted paths.
    pub fn to_csv(&self) -> Result<String> {
        let mut rows = Vec::new();
        flatten("", &serde_json::to_value(self)?, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["field", "value"])?;
        for (k, v) in rows {
            w.write_record([k, v])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        Value::Null => out.push((prefix.into(), String::new())),
        other => out.push((prefix.into(), other.to_string())),
    }
}
