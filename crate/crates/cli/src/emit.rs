//! Report serialization.

use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use zfrt_core::{CatalogSpec, CheckStatus, VerificationReport};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(CliError::UnknownFormat(other.to_string())),
        }
    }
}

/// SHA-256 of the canonical JSON form of the spec, hex encoded.
pub fn config_digest(spec: &CatalogSpec) -> String {
    let canonical = serde_json::to_vec(&spec.to_json()).expect("spec json");
    hex::encode(Sha256::digest(&canonical))
}

pub fn emit_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report json");
            s.push('\n');
            s
        }
        Format::Markdown => markdown(report),
    }
}

pub fn parse_report(text: &str) -> Result<VerificationReport> {
    let report: VerificationReport = serde_json::from_str(text).map_err(|e| CliError::Report(e.to_string()))?;
    let all_pass = report.checks.iter().all(|c| c.passed());
    if report.pass != all_pass {
        return Err(CliError::Report(format!("`pass` is {} but the checks say {all_pass}", report.pass)));
    }
    Ok(report)
}

fn markdown(report: &VerificationReport) -> String {
    let failed = report.failures().count();
    let mut s = String::new();
    let _ = writeln!(s, "# Verification report: {}\n", report.suite);
    let _ = writeln!(s, "- config digest: `{}`", report.config_digest);
    let _ = writeln!(s, "- checks: {} ({} passed, {failed} failed)", report.checks.len(), report.checks.len() - failed);
    let _ = writeln!(s, "- result: **{}**", if report.pass { "PASS" } else { "FAIL" });
    if report.checks.is_empty() {
        return s;
    }
    s.push_str("\n| id | status | momenta | witness entries | elapsed ms |\n|---|---|---|---|---|\n");
    for c in &report.checks {
        let status = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
        };
        let _ = writeln!(
            s,
            "| {} | {status} | {} | {} | {} |",
            c.id,
            c.momenta.join(", "),
            c.witness_nonzero_entries,
            c.elapsed_ms
        );
    }
    let details: Vec<_> = report.checks.iter().filter_map(|c| c.detail.as_ref().map(|d| (c, d))).collect();
    if !details.is_empty() {
        s.push_str("\n## Details\n\n");
        for (c, d) in details {
            let _ = writeln!(s, "- `{}` ({}): {d}", c.id, c.momenta.join(", "));
        }
    }
    s
}
