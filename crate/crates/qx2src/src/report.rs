use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One checked quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    /// `measured <= bound + tol`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, tol: f64) -> Self {
        Self::build(name, measured, bound, tol, measured <= bound + tol)
    }

    /// `measured >= bound − tol`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, tol: f64) -> Self {
        Self::build(name, measured, bound, tol, measured >= bound - tol)
    }

    /// `measured > bound`.
    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::build(name, measured, bound, 0.0, measured > bound)
    }

    /// `|measured − expected| <= tol`.
    pub fn equal(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Self::build(name, measured, expected, tol, (measured - expected).abs() <= tol)
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::build(name, ok as u8 as f64, 1.0, 0.0, ok)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn build(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64, pass: bool) -> Self {
        Self { name: name.into(), measured, bound, tolerance, pass, note: None }
    }
}

/// JSON report written by `verify`, `attack` and `bounds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub target: String,
    pub seed: u64,
    pub config: Value,
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Value>,
    pub pass: bool,
    pub wall_clock_ms: f64,
}

pub const WALL_CLOCK_FIELD: &str = "wall_clock_ms";

impl Report {
    pub fn new(
        command: &str,
        target: impl Into<String>,
        seed: u64,
        config: &impl Serialize,
        records: Vec<Record>,
        started: Instant,
    ) -> Self {
        let pass = records.iter().all(|r| r.pass);
        Self {
            command: command.to_string(),
            target: target.into(),
            seed,
            config: serde_json::to_value(config).expect("configs serialize"),
            records,
            table: None,
            pass,
            wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn with_table(mut self, table: Value) -> Self {
        self.table = Some(table);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report without its wall-clock field; equal seeds give equal bytes.
    pub fn deterministic_json(&self) -> String {
        strip_wall_clock(&self.to_json())
    }
}

/// Removes the wall-clock field from a serialized report.
pub fn strip_wall_clock(json: &str) -> String {
    let mut v: Value = serde_json::from_str(json).expect("valid report JSON");
    if let Some(obj) = v.as_object_mut() {
        obj.remove(WALL_CLOCK_FIELD);
    }
    serde_json::to_string_pretty(&v).expect("reports serialize")
}
