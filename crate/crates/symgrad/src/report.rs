//! Report records shared by the check batteries, the solver, and the CLI.

use serde::Serialize;

/// Outcome of one asserted inequality or consistency check.
///
/// The convention throughout the crate: a check passes when
/// `margin >= -tolerance`, so equality cases survive round-off and
/// quadrature slack.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    /// Signed distance to violation (normalized where noted in `details`).
    pub margin: f64,
    pub tolerance: f64,
    pub details: String,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, margin: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            pass: margin >= -tolerance,
            margin,
            tolerance,
            details: String::new(),
        }
    }

    pub fn with_details(mut self, details: impl Into<String>) -> Self {
        self.details = details.into();
        self
    }

    /// A check that records data without asserting anything.
    pub fn informational(name: impl Into<String>, details: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            pass: true,
            margin: 0.0,
            tolerance: 0.0,
            details: details.into(),
        }
    }
}

/// A batch of checks produced by one experiment.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckSet {
    pub checks: Vec<CheckRecord>,
}

impl CheckSet {
    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn extend(&mut self, other: CheckSet) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Worst (smallest) margin over the set; 0 for an empty set.
    pub fn worst_margin(&self) -> f64 {
        let worst = self.checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
        if worst.is_finite() {
            worst
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_allows_tolerance_slack() {
        assert!(CheckRecord::new("x", -1e-12, 1e-10).pass);
        assert!(!CheckRecord::new("x", -1e-9, 1e-10).pass);
        assert!(CheckRecord::new("x", 0.5, 0.0).pass);
    }

    #[test]
    fn set_aggregation() {
        let mut set = CheckSet::default();
        set.push(CheckRecord::new("a", 1.0, 0.0));
        set.push(CheckRecord::new("b", -1.0, 1e-10));
        assert!(!set.all_pass());
        assert_eq!(set.failures().len(), 1);
        assert_eq!(set.worst_margin(), -1.0);
    }
}
