//! Pass/fail reporting for the verification suites.

use serde::{Deserialize, Serialize};

/// One counterexample: a pair of object indices, the shift at which the
/// check failed, and the offending dimension.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Violation {
    pub source: usize,
    pub target: usize,
    pub shift: i64,
    pub dimension: usize,
    pub note: String,
}

/// Outcome of one verification pass. `passed` implies an empty
/// counterexample list; free-form notes cover structural failures that are
/// not indexed by a pair.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            passed: true,
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, v: Violation) {
        self.passed = false;
        self.violations.push(v);
    }

    pub fn check(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.push(violation());
        }
    }

    pub fn fail_note(&mut self, note: String) {
        self.passed = false;
        self.notes.push(note);
    }

    /// Merge another report into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.passed &= other.passed;
        self.violations.extend(other.violations);
        self.notes.extend(
            other
                .notes
                .into_iter()
                .map(|n| format!("{}: {n}", other.name)),
        );
    }

    pub fn summary(&self) -> String {
        if self.passed {
            format!("{}: pass ({} checks)", self.name, self.checked)
        } else {
            format!(
                "{}: FAIL ({} checks, {} violations{})",
                self.name,
                self.checked,
                self.violations.len(),
                if self.notes.is_empty() {
                    String::new()
                } else {
                    format!(", {} notes", self.notes.len())
                }
            )
        }
    }
}
