//! Machine-readable verdicts for lemma/theorem checks.
//!
//! Reports serialize to JSON with alphabetically sorted keys so that output
//! is diffable across runs; the elapsed time is the only non-reproducible
//! field and can be stripped via [`CheckReport::stable_json`].

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
}

/// Outcome of one check: the verdict, how many hypothesis cases were
/// examined, any counterexamples (sequence-grammar literals, independently
/// re-verifiable), and flagged oddities that do not refute the statement but
/// were recorded for manual review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub cases_examined: u64,
    pub check: String,
    pub counterexamples: Vec<String>,
    pub elapsed_ms: u64,
    pub flagged: Vec<String>,
    pub params: BTreeMap<String, serde_json::Value>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// JSON with the duration removed: bit-stable for fixed inputs.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialization cannot fail");
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string_pretty(&v).unwrap()
    }
}

/// Accumulates a report while a check runs; counterexample lists stay sorted
/// and deduplicated so that merge order cannot leak into the output.
pub struct ReportBuilder {
    check: String,
    params: BTreeMap<String, serde_json::Value>,
    cases: u64,
    counterexamples: Vec<String>,
    flagged: Vec<String>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(check: &str) -> Self {
        ReportBuilder {
            check: check.to_string(),
            params: BTreeMap::new(),
            cases: 0,
            counterexamples: Vec::new(),
            flagged: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn count_case(&mut self) {
        self.cases += 1;
    }

    pub fn count_cases(&mut self, n: u64) {
        self.cases += n;
    }

    pub fn counterexample(&mut self, literal: String) {
        self.counterexamples.push(literal);
    }

    pub fn flag(&mut self, literal: String) {
        self.flagged.push(literal);
    }

    pub fn has_counterexamples(&self) -> bool {
        !self.counterexamples.is_empty()
    }

    pub fn finish(mut self) -> CheckReport {
        self.counterexamples.sort();
        self.counterexamples.dedup();
        self.flagged.sort();
        self.flagged.dedup();
        let verdict = if self.counterexamples.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        CheckReport {
            cases_examined: self.cases,
            check: self.check,
            counterexamples: self.counterexamples,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
            flagged: self.flagged,
            params: self.params,
            verdict,
        }
    }
}
