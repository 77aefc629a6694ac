use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "h1lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Computed and reported, with no expected value.
    Finding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub index: usize,
    pub name: String,
    pub status: Status,
    pub details: Value,
}

/// Outcome of one command. `overall_pass` is true iff no step failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Value,
    pub input_digest: String,
    pub steps: Vec<Step>,
    pub overall_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.overall_pass {
            0
        } else {
            1
        }
    }

    /// One line per step.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let tag = match s.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Finding => "note",
            };
            out.push_str(&format!("[{tag}] {:>2} {}\n", s.index, s.name));
        }
        out.push_str(if self.overall_pass { "overall: pass\n" } else { "overall: FAIL\n" });
        out
    }
}

/// Collects steps in order, with optional wall-clock timing per step.
pub struct ReportBuilder {
    command: Value,
    steps: Vec<Step>,
    timings: BTreeMap<String, f64>,
    keep_timings: bool,
}

impl ReportBuilder {
    /// `command` holds every input that affects the result; its digest
    /// goes into the report.
    pub fn new(command: Value, keep_timings: bool) -> ReportBuilder {
        ReportBuilder {
            command,
            steps: Vec::new(),
            timings: BTreeMap::new(),
            keep_timings,
        }
    }

    pub fn push(&mut self, name: &str, status: Status, details: Value) {
        self.steps.push(Step {
            index: self.steps.len(),
            name: name.to_string(),
            status,
            details,
        });
    }

    pub fn check(&mut self, name: &str, ok: bool, details: Value) {
        self.push(name, if ok { Status::Pass } else { Status::Fail }, details);
    }

    /// Runs `f` and records its duration under `name`.
    pub fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(
            format!("{:02} {name}", self.timings.len()),
            t.elapsed().as_secs_f64() * 1e3,
        );
        out
    }

    pub fn finish(self) -> RunReport {
        let overall_pass = self.steps.iter().all(|s| s.status != Status::Fail);
        RunReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            input_digest: digest(&self.command),
            command: self.command,
            steps: self.steps,
            overall_pass,
            timings_ms: self.keep_timings.then_some(self.timings),
        }
    }
}

/// SHA-256 of the compact JSON form.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("value serializes");
    hex::encode(Sha256::digest(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overall_reflects_failures_only() {
        let mut b = ReportBuilder::new(json!({"cmd": "x"}), false);
        b.check("a", true, json!(null));
        b.push("b", Status::Finding, json!({"value": 3}));
        let r = b.finish();
        assert!(r.overall_pass);
        assert_eq!(r.exit_code(), 0);
        assert!(r.timings_ms.is_none());
        let mut b = ReportBuilder::new(json!({"cmd": "x"}), true);
        b.check("a", false, json!(null));
        let r = b.finish();
        assert!(!r.overall_pass);
        assert!(r.timings_ms.is_some());
    }

    #[test]
    fn json_round_trip() {
        let mut b = ReportBuilder::new(json!({"cmd": "y", "p": 5}), false);
        b.check("a", true, json!({"factors": [5, 5]}));
        let r = b.finish();
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.input_digest.len(), 64);
    }
}
