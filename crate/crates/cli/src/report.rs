//! Machine-readable run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use graphwh::word::ReducedWord;
use serde::Serialize;

use crate::config::ParamsConfig;
use crate::error::{CliError, EXIT_ERROR, EXIT_INVARIANT, EXIT_PASS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One checked property. Observed checks are reported but never fail a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub asserted: bool,
    pub passed: bool,
    pub value: f64,
    /// `value ≤ threshold` unless `lower_bound` is set.
    pub threshold: f64,
    pub lower_bound: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), asserted: true, passed: value <= threshold, value, threshold, lower_bound: false }
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), asserted: true, passed: value >= threshold, value, threshold, lower_bound: true }
    }

    pub fn observed(mut self) -> Self {
        self.asserted = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub a_measured: f64,
    pub b_measured: f64,
    pub m: usize,
    /// Index at which `A` and `B` were measured.
    pub measured_at_n: u32,
    pub schedule_n: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub params: ParamsConfig,
    pub constants: Option<Constants>,
    /// Largest residual per invariant family.
    pub residuals: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
    pub artifacts: Vec<String>,
    pub error: Option<ErrorInfo>,
}

/// What a pipeline produces before the verdict is attached.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub constants: Option<Constants>,
    pub residuals: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub details: serde_json::Map<String, serde_json::Value>,
    pub artifacts: Vec<String>,
}

impl Outcome {
    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn residual(&mut self, family: &str, value: f64) {
        let slot = self.residuals.entry(family.to_string()).or_insert(0.0);
        *slot = slot.max(value);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }
}

impl Report {
    pub fn from_outcome(command: &str, params: ParamsConfig, outcome: Outcome) -> Self {
        let ok = outcome.checks.iter().all(|c| c.passed || !c.asserted);
        Report {
            schema_version: crate::config::SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            exit_code: if ok { EXIT_PASS } else { EXIT_INVARIANT },
            params,
            constants: outcome.constants,
            residuals: outcome.residuals,
            checks: outcome.checks,
            details: serde_json::Value::Object(outcome.details),
            artifacts: outcome.artifacts,
            error: None,
        }
    }

    pub fn from_error(command: &str, params: ParamsConfig, err: &CliError) -> Self {
        Report {
            schema_version: crate::config::SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            status: Status::Error,
            exit_code: EXIT_ERROR,
            params,
            constants: None,
            residuals: BTreeMap::new(),
            checks: Vec::new(),
            details: serde_json::Value::Object(serde_json::Map::new()),
            artifacts: Vec::new(),
            error: Some(ErrorInfo { code: err.code(), message: err.to_string() }),
        }
    }

    /// The named check, if present.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let _ = writeln!(s, "{}: {status}", self.command);
        if let Some(e) = &self.error {
            let _ = writeln!(s, "  error [{}]: {}", e.code, e.message);
        }
        if let Some(c) = &self.constants {
            let _ = writeln!(
                s,
                "  A={:.6} B={:.6} M={} (measured at n={}), schedule n={}",
                c.a_measured, c.b_measured, c.m, c.measured_at_n, c.schedule_n
            );
        }
        for c in &self.checks {
            let tag = match (c.asserted, c.passed) {
                (false, _) => "info",
                (true, true) => "pass",
                (true, false) => "FAIL",
            };
            let op = if c.lower_bound { ">=" } else { "<=" };
            let _ = writeln!(s, "  [{tag}] {} = {:.6e} ({op} {:.3e})", c.name, c.value, c.threshold);
        }
        for a in &self.artifacts {
            let _ = writeln!(s, "  wrote {a}");
        }
        s
    }
}

/// `[[vertex, element], ...]`, the word format used in configs.
pub fn word_pairs(w: &ReducedWord) -> Vec<[usize; 2]> {
    w.letters().iter().map(|l| [l.vertex, l.element]).collect()
}

pub fn word_label(w: &ReducedWord) -> String {
    serde_json::to_string(&word_pairs(w)).expect("pairs serialize")
}
