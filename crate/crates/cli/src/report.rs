//! Suite reports and their text rendering.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;
use std::time::Instant;
use volut_core::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        })
    }
}

/// One named check with its outcome.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Counterexample for failures, found object for witness searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckEntry {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckEntry { name: name.into(), status: Status::Pass, detail: None, witness: None }
    }

    pub fn fail(name: impl Into<String>) -> Self {
        CheckEntry { name: name.into(), status: Status::Fail, detail: None, witness: None }
    }

    pub fn skip(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckEntry { name: name.into(), status: Status::Skip, detail: Some(why.into()), witness: None }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name)
        }
    }

    /// Pass iff `r` has no violation; the first violation becomes the witness.
    pub fn from_report(name: impl Into<String>, r: &ValidationReport) -> Self {
        let mut e = Self::from_bool(name, r.is_ok());
        if let Some(v) = r.violations.first() {
            e.witness = Some(serde_json::json!({ "law": v.law, "detail": v.detail, "violations": r.violations.len() }));
        }
        if !r.skipped.is_empty() {
            e.detail = Some(r.skipped.join("; "));
        }
        e
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub wall_time_s: f64,
    pub checks: Vec<CheckEntry>,
}

impl SuiteReport {
    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}): {} pass, {} fail, {} skip in {:.2}s",
            self.suite,
            self.seed,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.wall_time_s
        )?;
        for c in &self.checks {
            write!(f, "  [{}] {}", c.status, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
            if c.status == Status::Fail {
                if let Some(w) = &c.witness {
                    writeln!(f, "      witness: {w}")?;
                }
            }
        }
        Ok(())
    }
}

/// Collects entries and stamps the wall time on completion.
pub(crate) struct Builder {
    suite: String,
    seed: u64,
    start: Instant,
    checks: Vec<CheckEntry>,
}

impl Builder {
    pub fn new(suite: &str, seed: u64) -> Self {
        Builder { suite: suite.into(), seed, start: Instant::now(), checks: Vec::new() }
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.checks.push(e);
    }

    pub fn finish(self) -> SuiteReport {
        SuiteReport { suite: self.suite, seed: self.seed, wall_time_s: self.start.elapsed().as_secs_f64(), checks: self.checks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_entries_carry_the_first_violation() {
        let mut r = ValidationReport::new();
        assert_eq!(CheckEntry::from_report("x", &r).status, Status::Pass);
        r.push("lax-coherence", "at object 2");
        r.push("lax-coherence", "at object 3");
        let e = CheckEntry::from_report("x", &r);
        assert_eq!(e.status, Status::Fail);
        let w = e.witness.unwrap();
        assert_eq!(w["law"], "lax-coherence");
        assert_eq!(w["violations"], 2);
    }

    #[test]
    fn reports_round_trip_and_render() {
        let mut b = Builder::new("demo", 3);
        b.push(CheckEntry::pass("a"));
        b.push(CheckEntry::fail("b").witness(serde_json::json!({ "object": 1 })));
        b.push(CheckEntry::skip("c", "too large"));
        let r = b.finish();
        assert!(!r.passed());
        assert_eq!((r.count(Status::Pass), r.count(Status::Fail), r.count(Status::Skip)), (1, 1, 1));
        let back: SuiteReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let text = r.to_string();
        assert!(text.contains("[fail] b") && text.contains("witness: {\"object\":1}") && text.contains("[skip] c: too large"));
    }
}
