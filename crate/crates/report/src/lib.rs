//! Experiment reports and their canonical JSON form.
//!
//! Canonical JSON has sorted object keys, no insignificant whitespace, and
//! every floating point number printed with 17 significant digits, so two runs
//! with the same inputs produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotAsserted,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// `Fail` dominates, then `NotAsserted`, then `Pass`.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (NotAsserted, _) | (_, NotAsserted) => NotAsserted,
            _ => Pass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotAsserted => "not-asserted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, f64>,
    /// Named coordinate tuples, e.g. the argmax of a sweep.
    pub points: BTreeMap<String, Vec<f64>>,
    pub verdict: Verdict,
    /// Name of the violated precondition when the verdict is `NotAsserted`.
    pub precondition: Option<String>,
    pub notes: Vec<String>,
    pub artifacts: Vec<String>,
    pub children: Vec<ExperimentReport>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            parameters: BTreeMap::new(),
            metrics: BTreeMap::new(),
            points: BTreeMap::new(),
            verdict: Verdict::NotAsserted,
            precondition: None,
            notes: Vec::new(),
            artifacts: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_owned(), value.into());
    }

    pub fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_owned(), value);
        self
    }

    pub fn set_metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_owned(), value);
    }

    pub fn point(mut self, key: &str, coords: Vec<f64>) -> Self {
        self.points.insert(key.to_owned(), coords);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    /// Marks the report as not asserted because `name` did not hold.
    pub fn refuse(mut self, name: &str) -> Self {
        self.verdict = Verdict::NotAsserted;
        self.precondition = Some(name.to_owned());
        self
    }

    pub fn push_child(&mut self, child: ExperimentReport) {
        self.verdict = if self.children.is_empty() {
            child.verdict
        } else {
            self.verdict.combine(child.verdict)
        };
        self.children.push(child);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn metric_or_nan(&self, key: &str) -> f64 {
        self.metrics.get(key).copied().unwrap_or(f64::NAN)
    }

    /// The report as a JSON value with the schema tag attached.
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report fields are serializable");
        if let Value::Object(map) = &mut v {
            map.insert("schema".into(), Value::from(SCHEMA_VERSION));
        }
        v
    }

    pub fn to_canonical_json(&self) -> String {
        canonical_json(&self.to_value())
    }
}

/// Serializes `v` with sorted keys and 17-significant-digit floats.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(out, &map[k]);
            }
            out.push('}');
        }
    }
}

/// Scientific notation with 17 significant digits; non-finite values become `null`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write report to {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub fn emit_report(report: &ExperimentReport, path: &Path) -> Result<(), ReportError> {
    let io = |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, report.to_canonical_json()).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        ExperimentReport::new("demo")
            .param("p", 3.0)
            .param("seed", 7u64)
            .metric("max_gap", -1.0 / 3.0)
            .metric("zero", 0.0)
            .point("argmax", vec![1.0, 0.0])
            .with_verdict(Verdict::Pass)
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-1.0 / 3.0), "-3.3333333333333331e-1");
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn keys_are_sorted_and_schema_present() {
        let s = sample().to_canonical_json();
        let keys = ["artifacts", "children", "metrics", "name", "notes", "parameters"];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(s.contains("\"schema\":1"));
        assert!(s.contains("\"seed\":7"));
    }

    #[test]
    fn round_trips_through_parser() {
        let r = sample();
        let s = r.to_canonical_json();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["metrics"]["max_gap"].as_f64().unwrap(), -1.0 / 3.0);
        assert_eq!(v["verdict"], "pass");
        assert_eq!(canonical_json(&v), s);
    }

    #[test]
    fn verdict_combination() {
        use Verdict::*;
        assert_eq!(Pass.combine(NotAsserted), NotAsserted);
        assert_eq!(NotAsserted.combine(Fail), Fail);
        assert_eq!(Pass.combine(Pass), Pass);
    }

    #[test]
    fn refusal_records_precondition() {
        let r = ExperimentReport::new("x").refuse("smallness");
        assert_eq!(r.verdict, Verdict::NotAsserted);
        assert!(r.to_canonical_json().contains("\"precondition\":\"smallness\""));
    }
}
