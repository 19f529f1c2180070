//! Run configuration and the versioned JSON report shared by every pipeline.

mod runs;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Result};
use crate::g2_reps::Convention;

pub use runs::{run_all, run_calibrate, run_cech, run_chern_weil, run_gerbe, run_identities, run_toy, structure_for};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub convention: Convention,
    /// Truncation `K`.
    pub truncation: i32,
    pub sigma: f64,
    pub radius: f64,
    pub quad_order: usize,
    pub seed: u64,
    /// Normal axes of the coassociative torus.
    pub axes: [usize; 3],
    pub offsets: [f64; 3],
    /// Replaces the model 3-form; parsed with the form grammar.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_override: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifolds: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    /// Coordinate subset for `calibrate`.
    #[serde(default)]
    pub subset: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            convention: Convention::Default,
            truncation: 8,
            sigma: 0.03,
            radius: 0.25,
            quad_order: 26,
            seed: 0,
            axes: [1, 2, 3],
            offsets: [0.5, 0.5, 0.5],
            phi_override: None,
            manifolds: None,
            complex: None,
            subset: vec![4, 5, 6, 7],
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.truncation < 1 {
            return Err(invalid(format!("K must be at least 1, got {}", self.truncation)));
        }
        if !(self.sigma > 0.0 && 3.0 * self.sigma < self.radius && self.radius < 0.5) {
            return Err(invalid(format!(
                "need 0 < 3 sigma < r < 0.5, got sigma = {}, r = {}",
                self.sigma, self.radius
            )));
        }
        if self.quad_order < 2 {
            return Err(invalid("quadrature order must be at least 2"));
        }
        if self.offsets.iter().any(|o| !o.is_finite()) {
            return Err(invalid("offsets must be finite"));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Obstructed,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// The statement being verified.
    pub anchor: String,
    pub residuals: BTreeMap<String, f64>,
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            anchor: anchor.into(),
            residuals: BTreeMap::new(),
            values: BTreeMap::new(),
            note: None,
        }
    }

    pub fn residual(mut self, key: &str, v: f64) -> Self {
        self.residuals.insert(key.to_string(), v);
        self
    }

    /// Records `v` and fails the check unless `v ≤ tol`.
    pub fn bounded(mut self, key: &str, v: f64, tol: f64) -> Self {
        self.residuals.insert(key.to_string(), v);
        if !(v <= tol) {
            self.status = self.status.max(Status::Fail);
        }
        self
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn require(mut self, ok: bool) -> Self {
        if !ok {
            self.status = self.status.max(Status::Fail);
        }
        self
    }

    pub fn with_status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A CSV artifact produced by a run.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDump {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub config: RunConfig,
    pub status: Status,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub fields: Vec<FieldDump>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA,
            tool: "g2forge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            timestamp: None,
            config: config.clone(),
            status: Status::Pass,
            checks: Vec::new(),
            notes: Vec::new(),
            fields: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
        self.finish();
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        self.fields.extend(other.fields);
        self.finish();
    }

    /// Sorts checks by name and recomputes the overall status.
    pub fn finish(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.fields.sort_by(|a, b| a.name.cmp(&b.name));
        self.status = self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 when everything passed, 1 on any failure, 2 when only obstructions remain.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Obstructed => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.radius = 0.05;
        assert!(c.validate().is_err());
        c = RunConfig { truncation: 0, ..RunConfig::default() };
        assert!(c.validate().is_err());
        c = RunConfig { radius: 0.5, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn status_and_ordering() {
        let mut r = Report::new("t", &RunConfig::default());
        r.push(Check::new("b", "x").bounded("r", 1.0, 2.0));
        r.push(Check::new("a", "x"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::new("c", "x").with_status(Status::Obstructed));
        assert_eq!(r.exit_code(), 2);
        r.push(Check::new("0", "x").bounded("r", f64::NAN, 1.0));
        assert_eq!(r.exit_code(), 1);
        let names: Vec<_> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["0", "a", "b", "c"]);
        assert!(r.to_json().contains("\"schema\": 1"));
    }
}
