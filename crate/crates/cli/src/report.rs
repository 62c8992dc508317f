//! Reports: a deterministic record of one command, rendered as text or JSON.

use serde::Serialize;
use serde_json::Value;

use sdw_core::Caps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    True,
    False,
    Inconclusive,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::True => 0,
            Outcome::False => 1,
            Outcome::Inconclusive => 2,
            Outcome::Error => 3,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b { Outcome::True } else { Outcome::False }
    }
}

/// What a command handler produces.
#[derive(Debug, Clone)]
pub struct Done {
    pub outcome: Outcome,
    pub summary: String,
    /// Search bounds in force, for commands that have them.
    pub bounds: Option<Value>,
    pub result: Value,
}

impl Done {
    pub fn new(outcome: Outcome, summary: impl Into<String>, result: impl Serialize) -> Self {
        Done { outcome, summary: summary.into(), bounds: None, result: to_value(result) }
    }

    pub fn with_bounds(mut self, bounds: impl Serialize) -> Self {
        self.bounds = Some(to_value(bounds));
        self
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report payloads are plain data")
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub outcome: Outcome,
    pub summary: String,
    pub caps: Caps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Value>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("outcome: {} (exit {})\n", serde_plain(&self.outcome), self.exit_code());
        out += &format!("summary: {}\n", self.summary);
        render("caps", &to_value(self.caps), 0, &mut out);
        if let Some(b) = &self.bounds {
            render("bounds", b, 0, &mut out);
        }
        if !self.result.is_null() {
            render("result", &self.result, 0, &mut out);
        }
        if let Some(ms) = self.timing_ms {
            out += &format!("timing: {ms} ms\n");
        }
        out
    }
}

fn serde_plain(o: &Outcome) -> String {
    to_value(o).as_str().unwrap_or_default().to_string()
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_)) && !matches!(v, Value::Array(a) if a.iter().any(|x| matches!(x, Value::Object(_))))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(key: &str, v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    if is_scalar(v) {
        out.push_str(&format!("{pad}{key}: {}\n", scalar_text(v)));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                render(k, x, depth + 1, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                render(&format!("[{i}]"), x, depth + 1, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_rendering_is_indented() {
        let r = Report {
            command: vec!["x".into()],
            outcome: Outcome::Inconclusive,
            summary: "s".into(),
            caps: Caps::default(),
            bounds: Some(json!({"max_len": 12})),
            result: json!({"a": [1, 2], "b": [{"c": "d"}]}),
            timing_ms: None,
        };
        let t = r.to_text();
        assert!(t.starts_with("outcome: inconclusive (exit 2)\n"));
        assert!(t.contains("bounds:\n  max_len: 12\n"));
        assert!(t.contains("result:\n  a: [1,2]\n  b:\n    [0]:\n      c: d\n"));
        assert!(!r.to_json().contains("timing_ms"));
    }
}
