//! Machine-readable verification reports shared by every validator.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stage: Option<usize>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Records one identity; `witness` is `None` when it holds.
    pub fn record(&mut self, identity: impl Into<String>, stage: Option<usize>, witness: Option<String>) {
        self.checks.push(Check {
            identity: identity.into(),
            stage,
            pass: witness.is_none(),
            witness,
        });
    }

    pub fn pass(&mut self, identity: impl Into<String>, stage: Option<usize>) {
        self.record(identity, stage, None);
    }

    pub fn fail(&mut self, identity: impl Into<String>, stage: Option<usize>, witness: impl Into<String>) {
        self.record(identity, stage, Some(witness.into()));
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn first_failure_label(&self) -> String {
        match self.first_failure() {
            Some(c) => {
                let mut s = c.identity.clone();
                if let Some(st) = c.stage {
                    s.push_str(&format!(" (stage {st})"));
                }
                if let Some(w) = &c.witness {
                    s.push_str(&format!(" at {w}"));
                }
                s
            }
            None => "none".to_string(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, identity: &str, stage: Option<usize>) -> Option<&Check> {
        self.checks.iter().find(|c| c.identity == identity && c.stage == stage)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}
