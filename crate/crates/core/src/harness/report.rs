//! Machine-readable experiment reports.

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// One named check: a measured value judged against a target with an
/// explicit tolerance, so every pass/fail is attributable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub target: f64,
    /// Absolute tolerance the check was judged against (already includes
    /// any statistical and discretization components).
    pub tolerance: f64,
    /// Statistical standard error when the value is a Monte Carlo estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_error: Option<f64>,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            target,
            tolerance,
            standard_error: None,
            pass: (value - target).abs() <= tolerance,
        }
    }

    pub fn with_se(mut self, se: f64) -> Self {
        self.standard_error = Some(se);
        self
    }

    /// A check judged by an upper bound rather than a target interval.
    pub fn upper_bound(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            target: bound,
            tolerance: bound,
            standard_error: None,
            pass: value <= bound,
        }
    }

    /// A check judged by a lower bound (e.g. convergence orders).
    pub fn lower_bound(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            target: bound,
            tolerance: bound,
            standard_error: None,
            pass: value >= bound,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub experiment: String,
    pub seed: u64,
    pub n_paths: usize,
    pub runtime_seconds: f64,
    pub versions: Versions,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Versions {
    pub package: String,
    pub version: String,
}

impl ComparisonReport {
    pub fn new(experiment: &str, seed: u64, n_paths: usize) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            n_paths,
            runtime_seconds: 0.0,
            versions: Versions {
                package: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            checks: Vec::new(),
            warnings: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.passed &= check.pass;
        self.checks.push(check);
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| crate::Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_fail_accumulates() {
        let mut r = ComparisonReport::new("demo", 1, 100);
        r.push(CheckResult::new("a", 1.0, 1.0, 0.1));
        assert!(r.passed);
        r.push(CheckResult::new("b", 2.0, 1.0, 0.1));
        assert!(!r.passed);
        assert!(r.checks[1].tolerance == 0.1);
    }

    #[test]
    fn bound_checks() {
        assert!(CheckResult::upper_bound("ks", 0.01, 0.02).pass);
        assert!(!CheckResult::upper_bound("ks", 0.05, 0.02).pass);
        assert!(CheckResult::lower_bound("order", 1.8, 1.3).pass);
    }

    #[test]
    fn json_serialization_round_trips() {
        let mut r = ComparisonReport::new("demo", 7, 500);
        r.push(CheckResult::new("m", 0.5, 0.49, 0.05).with_se(0.01));
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let back: ComparisonReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back.checks.len(), 1);
        assert_eq!(back.checks[0].standard_error, Some(0.01));
        assert!(back.passed);
    }
}
