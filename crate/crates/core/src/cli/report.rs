//! JSON reports with sorted keys and shortest round-trip floats.

use super::{scene::SCHEMA, CliError, EXIT_ERROR};
use crate::lorentz::DegeneracyVerdict;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut m = Map::new();
        m.insert("schema".into(), Value::from(SCHEMA));
        m.insert("command".into(), Value::from(command));
        Report { value: Value::Object(m), code: 0 }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.value
            .as_object_mut()
            .expect("report is an object")
            .insert(key.to_string(), value);
    }

    pub fn error(command: &str, e: &CliError) -> Self {
        let mut r = Report::new(command);
        r.set("error", json!({ "kind": e.kind(), "message": e.to_string() }));
        r.code = EXIT_ERROR;
        r
    }

    pub fn render(&self) -> String {
        render_value(&self.value)
    }
}

pub fn render_value(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn verdict_value(v: &DegeneracyVerdict) -> Value {
    json!({
        "degenerate": v.is_degenerate,
        "sigma_min": v.sigma_min,
        "sigma_max": v.sigma_max,
        "det": v.det_value,
        "nullity": v.nullity,
    })
}
