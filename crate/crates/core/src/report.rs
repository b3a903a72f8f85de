//! Validation reports shared by every checker.

use serde::{Deserialize, Serialize};
use std::fmt;

/// One violated law instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub detail: String,
}

/// Collects every violation found by a checker.
///
/// A report may carry a limit, in which case checkers stop early once the
/// limit is reached and `truncated` is set.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub skipped: Vec<String>,
    pub truncated: bool,
    #[serde(skip)]
    limit: Option<usize>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// A report that stops accepting violations after `n` entries.
    pub fn with_limit(n: usize) -> Self {
        ValidationReport { limit: Some(n), ..Self::default() }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// True once the limit has been reached.
    pub fn full(&self) -> bool {
        matches!(self.limit, Some(n) if self.violations.len() >= n)
    }

    /// Violations still accepted before the limit is reached.
    pub fn remaining(&self) -> Option<usize> {
        self.limit.map(|n| n.saturating_sub(self.violations.len()))
    }

    pub fn push(&mut self, law: &str, detail: impl Into<String>) {
        if self.full() {
            self.truncated = true;
            return;
        }
        self.violations.push(Violation { law: law.to_string(), detail: detail.into() });
    }

    /// Records a violation when `ok` is false, formatting the detail lazily.
    pub fn require(&mut self, ok: bool, law: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.push(law, detail());
        }
    }

    pub fn skip(&mut self, what: impl Into<String>) {
        self.skipped.push(what.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for v in other.violations {
            if self.full() {
                self.truncated = true;
                break;
            }
            self.violations.push(v);
        }
        self.truncated |= other.truncated;
        self.skipped.extend(other.skipped);
    }

    /// Violations whose law name starts with `prefix`.
    pub fn count_law(&self, prefix: &str) -> usize {
        self.violations.iter().filter(|v| v.law.starts_with(prefix)).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")?;
        } else {
            writeln!(f, "{} violation(s)", self.violations.len())?;
            for v in self.violations.iter().take(20) {
                writeln!(f, "  [{}] {}", v.law, v.detail)?;
            }
            if self.violations.len() > 20 {
                writeln!(f, "  ...")?;
            }
        }
        if !self.skipped.is_empty() {
            write!(f, " ({} skipped)", self.skipped.len())?;
        }
        Ok(())
    }
}
