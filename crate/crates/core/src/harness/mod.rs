//! Executable checks of reversibility and faithfulness, plus a random module
//! generator for property tests.

mod checks;
mod generate;

use std::fmt;

use serde::Serialize;
use serde_json::Value as Json;

pub use checks::{
    faithfulness_check, function_check, function_check_pair, lemma_checks, lemma_checks_with,
    roundtrip_check, roundtrip_check_with, roundtrip_pair, CheckConfig,
};
pub use generate::{random_module, SizeBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One discrepancy, located at a step of the run it was found in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub step: usize,
    pub kind: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub forward_steps: usize,
    pub backward_steps: usize,
    pub states_compared: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
    pub stats: Stats,
    pub notes: Vec<String>,
}

/// Findings kept per report; a diverging run would otherwise report every
/// later step as well.
const MAX_FINDINGS: usize = 20;

impl CheckReport {
    pub(crate) fn new(check: &str) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            verdict: Verdict::Pass,
            findings: Vec::new(),
            stats: Stats::default(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, step: usize, kind: &str, expected: impl ToString, actual: impl ToString) {
        self.verdict = Verdict::Fail;
        if self.findings.len() < MAX_FINDINGS {
            self.findings.push(Finding {
                step,
                kind: kind.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The first finding, if any.
    pub fn first_failure(&self) -> Option<&Finding> {
        self.findings.first()
    }

    pub fn to_json(&self) -> Json {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {verdict}", self.check)?;
        let s = &self.stats;
        if s.backward_steps > 0 || self.check == "roundtrip" {
            write!(
                f,
                " ({} steps forward, {} back",
                s.forward_steps, s.backward_steps
            )?;
        } else {
            write!(f, " ({} steps", s.forward_steps)?;
        }
        write!(f, ", {} states compared)", s.states_compared)?;
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        for x in &self.findings {
            write!(
                f,
                "\n  step {}: {}: expected {}, got {}",
                x.step, x.kind, x.expected, x.actual
            )?;
        }
        Ok(())
    }
}
