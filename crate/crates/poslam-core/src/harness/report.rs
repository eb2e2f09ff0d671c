//! Check reports: one record per property check, serializable as a line
//! of structured text.

use serde::Serialize;

/// Outcome of one property check over a corpus.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub property: String,
    pub corpus: String,
    pub checked: usize,
    pub violations: usize,
    /// Printed witnesses for the first few violations.
    pub witnesses: Vec<String>,
    /// Instances that could not be decided (e.g. truncated graphs),
    /// reported separately and excluded from the violation count.
    pub undecided: usize,
}

impl CheckReport {
    pub fn new(property: impl Into<String>, corpus: impl Into<String>) -> CheckReport {
        CheckReport {
            property: property.into(),
            corpus: corpus.into(),
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
            undecided: 0,
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < 5 {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn undecided(&mut self) {
        self.checked += 1;
        self.undecided += 1;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let undecided = if self.undecided > 0 {
            format!(", {} undecided", self.undecided)
        } else {
            String::new()
        };
        format!(
            "[{status}] {}: {} checked, {} violations{} ({})",
            self.property, self.checked, self.violations, undecided, self.corpus
        )
    }
}
