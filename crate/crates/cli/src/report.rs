use std::fmt::Write as _;

use germcalc::io::{float_json, scalar_json, series_json};
use germcalc::{Scalar, Series};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::cli::Format;

/// A report: the config it ran with, then named results.
pub struct Report {
    command: &'static str,
    config: Value,
    json: Map<String, Value>,
    text: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &'static str, config: &impl Serialize) -> Self {
        Report {
            command,
            config: normalize(serde_json::to_value(config).expect("serializable config")),
            json: Map::new(),
            text: Vec::new(),
        }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        let v = normalize(serde_json::to_value(v).expect("serializable result"));
        self.text.push((key.into(), v.to_string()));
        self.json.insert(key.into(), v);
        self
    }

    pub fn scalar<S: Scalar>(&mut self, key: &str, c: &S) -> &mut Self {
        self.value(key, scalar_json(c))
    }

    pub fn series<S: Scalar>(&mut self, key: &str, s: &Series<S>, vars: &[String]) -> &mut Self {
        self.json.insert(key.into(), series_json(s, Some(vars)));
        self.text.push((key.into(), s.display_with(vars)));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut top = Map::new();
                top.insert("command".into(), Value::from(self.command));
                top.insert("config".into(), self.config.clone());
                top.insert("result".into(), Value::Object(self.json.clone()));
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!("germcalc {}\n", self.command);
                let _ = writeln!(s, "  config: {}", self.config);
                for (k, v) in &self.text {
                    let _ = writeln!(s, "{k}: {v}");
                }
                s
            }
        }
    }
}

/// Rewrites every float with 17 significant digits so reports are stable.
fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            n.as_f64().map(float_json).unwrap_or(Value::Number(n))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}
