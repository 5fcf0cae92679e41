use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Proved,
    Refuted,
    NeedsCertificate,
    Experimental,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Proved => "PROVED",
            Status::Refuted => "REFUTED",
            Status::NeedsCertificate => "NEEDS_CERTIFICATE",
            Status::Experimental => "EXPERIMENTAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// The bound λ ≥ level.
    pub level: u32,
    pub status: Status,
    pub note: String,
}

/// λ as a ladder of per-level verdicts for one (D, p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub schema: u32,
    pub command: String,
    pub disc: String,
    pub p: String,
    /// Number of primes above p; λ_cs = min{n : Ψ⁽ⁿ⁾ ≠ 0} − #S + 1.
    pub s_count: u32,
    pub verdicts: Vec<Verdict>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

impl LambdaReport {
    /// REFUTED at some level forbids PROVED above it.
    pub fn is_monotone(&self) -> bool {
        let first_refuted = self.verdicts.iter().filter(|v| v.status == Status::Refuted).map(|v| v.level).min();
        match first_refuted {
            Some(r) => self.verdicts.iter().all(|v| v.level <= r || v.status != Status::Proved),
            None => true,
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("D = {}, p = {}, #S = {}\n", self.disc, self.p, self.s_count);
        for v in &self.verdicts {
            let _ = writeln!(out, "  λ ≥ {}  {:<18} {}", v.level, v.status.label(), v.note);
        }
        out
    }
}

/// One line of an invariant suite: `passed` of `total` checks held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: 0, total: 0, trace: Vec::new() }
    }

    pub fn record(&mut self, ok: bool) {
        self.total += 1;
        self.passed += ok as usize;
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}/{}", if self.ok() { "ok  " } else { "FAIL" }, self.name, self.passed, self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub topic: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn render(&self, verbose: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{}", c.line());
            if verbose {
                for t in &c.trace {
                    let _ = writeln!(out, "      {t}");
                }
            }
        }
        out
    }
}
