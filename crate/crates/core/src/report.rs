//! Verification reports: one entry per checked identity and momentum tuple.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::momentum::Momentum;

static RECORD_TIMINGS: AtomicBool = AtomicBool::new(false);

/// Default for reports created afterwards. Off by default so reports are
/// reproducible byte for byte.
pub fn record_timings(on: bool) {
    RECORD_TIMINGS.store(on, Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: CheckStatus,
    pub momenta: Vec<String>,
    pub witness_nonzero_entries: usize,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Outcome of one evaluated identity: size of the nonzero residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub residual_entries: usize,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn zero() -> Self {
        Outcome { residual_entries: 0, detail: None }
    }

    pub fn residual(entries: usize) -> Self {
        Outcome { residual_entries: entries, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    #[serde(rename = "config-digest", default)]
    pub config_digest: String,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    #[serde(skip)]
    timings: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            config_digest: String::new(),
            checks: Vec::new(),
            pass: true,
            timings: RECORD_TIMINGS.load(Ordering::Relaxed),
        }
    }

    /// Records wall-clock times for subsequent checks.
    pub fn with_timings(mut self, on: bool) -> Self {
        self.timings = on;
        self
    }

    pub fn timings(&self) -> bool {
        self.timings
    }

    pub fn push(&mut self, check: CheckResult) {
        self.pass &= check.passed();
        self.checks.push(check);
    }

    /// Evaluates one identity. Errors become failing entries carrying the message.
    pub fn check(&mut self, id: impl Into<String>, momenta: &[Momentum], eval: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let outcome = eval();
        let elapsed_ms = if self.timings { start.elapsed().as_millis() as u64 } else { 0 };
        let (status, witness, detail) = match outcome {
            Ok(o) if o.residual_entries == 0 && o.detail.is_none() => (CheckStatus::Pass, 0, None),
            Ok(o) => (CheckStatus::Fail, o.residual_entries, o.detail),
            Err(e) => (CheckStatus::Fail, 0, Some(e.to_string())),
        };
        self.push(CheckResult {
            id: id.into(),
            status,
            momenta: momenta.iter().map(|k| k.to_string()).collect(),
            witness_nonzero_entries: witness,
            elapsed_ms,
            detail,
        });
    }

    /// Appends the checks of `other` with ids prefixed by its suite name.
    pub fn absorb(&mut self, other: VerificationReport) {
        for mut c in other.checks {
            c.id = format!("{}/{}", other.suite, c.id);
            self.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Checks whose id starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckResult> + 'a {
        self.checks.iter().filter(move |c| c.id.starts_with(prefix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CoreError;

    #[test]
    fn overall_status_tracks_checks() {
        let mut r = VerificationReport::new("demo");
        assert!(r.pass);
        r.check("ok", &[Momentum::int(1)], || Ok(Outcome::zero()));
        assert!(r.pass);
        r.check("bad", &[], || Ok(Outcome::residual(3)));
        r.check("err", &[], || Err(CoreError::NonTermination(5)));
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 2);
        assert_eq!(r.checks[1].witness_nonzero_entries, 3);
        assert_eq!(r.checks[0].elapsed_ms, 0);
    }

    #[test]
    fn json_round_trip() {
        let mut r = VerificationReport::new("demo");
        r.check("x", &[Momentum::int(-2)], || Ok(Outcome::residual(1)));
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"config-digest\""));
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
