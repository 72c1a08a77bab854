//! Check results shared by every verification routine.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// At most this many counterexamples are listed per check; the total is
/// always kept in `failing_configurations`.
pub const MAX_LISTED_FAILURES: usize = 25;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckResult {
    pub property: String,
    pub configurations_tested: u64,
    pub passed: bool,
    pub failing_configurations: u64,
    pub failures: Vec<Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, Value>,
}

impl CheckResult {
    pub fn new(property: impl Into<String>) -> Self {
        CheckResult {
            property: property.into(),
            configurations_tested: 0,
            passed: true,
            failing_configurations: 0,
            failures: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn pass(&mut self) {
        self.configurations_tested += 1;
    }

    pub fn fail(&mut self, witness: Value) {
        self.configurations_tested += 1;
        self.failing_configurations += 1;
        self.passed = false;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(witness);
        }
    }

    /// Record one configuration.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        if ok {
            self.pass();
        } else {
            self.fail(witness());
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.notes.insert(key.into(), value.into());
    }

    /// Fold another partial result for the same property into this one.
    pub fn absorb(&mut self, other: CheckResult) {
        self.configurations_tested += other.configurations_tested;
        self.failing_configurations += other.failing_configurations;
        self.passed &= other.passed;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
    }
}

pub fn all_passed<'a>(checks: impl IntoIterator<Item = &'a CheckResult>) -> bool {
    checks.into_iter().all(|c| c.passed)
}
