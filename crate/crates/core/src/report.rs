//! Pass/fail records produced by validators and law checks.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A violated equation together with the elements exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub message: String,
    pub witness: Value,
}

impl Violation {
    pub fn new(message: impl Into<String>, witness: impl Serialize) -> Self {
        Self {
            message: message.into(),
            witness: serde_json::to_value(witness).unwrap_or(Value::Null),
        }
    }

    pub fn prefixed(self, context: &str) -> Self {
        Self { message: format!("{context}: {}", self.message), witness: self.witness }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (witness {})", self.message, self.witness)
    }
}

impl std::error::Error for Violation {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail { failures: usize, message: String, witness: Value },
    Skipped { reason: String },
}

/// Outcome of one law (or validator) over a set of instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub law: String,
    pub instances: usize,
    pub bound: usize,
    #[serde(flatten)]
    pub status: Status,
    /// Instances set aside without a verdict, e.g. beyond a size limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn skipped(law: impl Into<String>, bound: usize, reason: impl Into<String>) -> Self {
        Self { law: law.into(), instances: 0, bound, status: Status::Skipped { reason: reason.into() }, note: None }
    }

    /// Single-instance report from a validator result.
    pub fn from_result(law: impl Into<String>, bound: usize, result: Result<(), Violation>) -> Self {
        let mut check = Check::new(law, bound);
        check.record(result);
        check.finish()
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail { .. })
    }

    pub fn witness(&self) -> Option<&Value> {
        match &self.status {
            Status::Fail { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Pass => write!(f, "PASS {} ({} instances, bound {})", self.law, self.instances, self.bound)?,
            Status::Fail { failures, message, witness } => write!(
                f,
                "FAIL {} ({failures}/{} instances, bound {}): {message}; witness {witness}",
                self.law, self.instances, self.bound
            )?,
            Status::Skipped { reason } => return write!(f, "SKIP {} (bound {}): {reason}", self.law, self.bound),
        }
        match &self.note {
            Some(note) => write!(f, " [not checked: {note}]"),
            None => Ok(()),
        }
    }
}

/// Accumulates instance outcomes for one law; keeps the first failure.
#[derive(Debug, Clone)]
pub struct Check {
    law: String,
    bound: usize,
    instances: usize,
    failures: usize,
    first: Option<Violation>,
    skip: Option<String>,
    notes: Vec<String>,
}

impl Check {
    pub fn new(law: impl Into<String>, bound: usize) -> Self {
        Self { law: law.into(), bound, instances: 0, failures: 0, first: None, skip: None, notes: Vec::new() }
    }

    pub fn record(&mut self, result: Result<(), Violation>) {
        self.instances += 1;
        if let Err(v) = result {
            self.failures += 1;
            self.first.get_or_insert(v);
        }
    }

    pub fn pass(&mut self) {
        self.instances += 1;
    }

    pub fn fail(&mut self, v: Violation) {
        self.record(Err(v));
    }

    /// Mark the law as not applicable; only used when nothing was checked.
    pub fn skip(&mut self, reason: impl Into<String>) {
        self.skip.get_or_insert_with(|| reason.into());
    }

    /// Record instances that were set aside without a verdict.
    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn instances(&self) -> usize {
        self.instances
    }

    pub fn finish(self) -> VerificationReport {
        let note = (!self.notes.is_empty()).then(|| self.notes.join("; "));
        let (status, note) = match (self.first, self.skip) {
            (None, Some(reason)) if self.instances == 0 => {
                (Status::Skipped { reason: note.map_or(reason.clone(), |n| format!("{reason}; {n}")) }, None)
            }
            (Some(v), _) => (Status::Fail { failures: self.failures, message: v.message, witness: v.witness }, note),
            (None, _) => (Status::Pass, note),
        };
        VerificationReport { law: self.law, instances: self.instances, bound: self.bound, status, note }
    }
}

/// Early-return helper for validators.
pub(crate) fn ensure(cond: bool, violation: impl FnOnce() -> Violation) -> Result<(), Violation> {
    if cond {
        Ok(())
    } else {
        Err(violation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_is_kept() {
        let mut c = Check::new("law", 4);
        c.pass();
        c.fail(Violation::new("first", [1, 2]));
        c.fail(Violation::new("second", [3]));
        let r = c.finish();
        assert_eq!(r.instances, 3);
        match &r.status {
            Status::Fail { failures, message, witness } => {
                assert_eq!(*failures, 2);
                assert_eq!(message, "first");
                assert_eq!(witness, &serde_json::json!([1, 2]));
            }
            other => panic!("{other:?}"),
        }
        assert!(r.to_string().starts_with("FAIL law"));
    }

    #[test]
    fn skipped_only_when_empty() {
        let mut c = Check::new("law", 2);
        c.skip("nothing eligible");
        assert!(matches!(c.clone().finish().status, Status::Skipped { .. }));
        c.pass();
        assert!(c.finish().passed());
    }

    #[test]
    fn json_shape() {
        let r = VerificationReport::from_result("x", 3, Ok(()));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"law": "x", "instances": 1, "bound": 3, "status": "pass"}));
    }

    #[test]
    fn notes_survive_a_pass() {
        let mut c = Check::new("law", 2);
        c.pass();
        c.note("3 pairs too large");
        let r = c.finish();
        assert!(r.passed());
        assert_eq!(r.note.as_deref(), Some("3 pairs too large"));
        assert!(r.to_string().ends_with("[not checked: 3 pairs too large]"));
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
