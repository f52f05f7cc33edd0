//! Residual reports shared by the verification suites and the JSON output.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub label: String,
    pub anchor: String,
    pub residual: f64,
    pub pass: bool,
}

/// One verification suite: a tolerance and a list of residual entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub name: String,
    pub anchor: String,
    pub tolerance: f64,
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), anchor: anchor.into(), tolerance, entries: Vec::new() }
    }

    /// Records a residual that must not exceed the tolerance.
    pub fn push(&mut self, label: impl Into<String>, anchor: impl Into<String>, residual: f64) {
        let pass = residual.is_finite() && residual <= self.tolerance;
        self.entries.push(RelationEntry { label: label.into(), anchor: anchor.into(), residual, pass });
    }

    /// Records a quantity that must be at least `floor` (contrast checks).
    pub fn push_at_least(&mut self, label: impl Into<String>, anchor: impl Into<String>, value: f64, floor: f64) {
        let pass = value.is_finite() && value >= floor;
        self.entries.push(RelationEntry { label: label.into(), anchor: anchor.into(), residual: value, pass });
    }

    pub fn extend(&mut self, other: RelationReport) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn pass_count(&self) -> usize {
        self.entries.iter().filter(|e| e.pass).count()
    }

    pub fn fail_count(&self) -> usize {
        self.entries.len() - self.pass_count()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| if e.residual.is_nan() { f64::INFINITY } else { m.max(e.residual) })
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}
