//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL: &str = "avjet";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// What is needed to look at and replay a failing case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Printed forms of the sampled inputs, in the text syntax.
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    /// A CLI invocation that reruns exactly this case.
    pub reproduce: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The statement being checked, in words.
    pub reference: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub seed: u64,
    pub charts: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: &str, seed: u64, charts: Vec<String>, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().filter(|c| c.status == Status::Pass).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        Report { tool: TOOL.into(), version: VERSION.into(), suite: suite.into(), seed, charts, checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Pretty-printed JSON with a trailing newline. Maps are ordered, so
    /// equal reports serialize to identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(src)
    }

    /// One line per group of checks, failures in full.
    ///
    /// Sampled cases `group#i` are grouped by `group`; enumerated cases drop
    /// their last two id segments.
    pub fn to_text(&self) -> String {
        let mut groups: Vec<(String, usize, usize)> = Vec::new();
        for c in &self.checks {
            let key = match c.id.rsplit_once('#') {
                Some((g, _)) => g.to_string(),
                None => {
                    let parts: Vec<&str> = c.id.split('/').collect();
                    parts[..parts.len().saturating_sub(2).max(1)].join("/")
                }
            };
            let pass = usize::from(c.status == Status::Pass);
            match groups.last_mut() {
                Some((g, p, t)) if *g == key => {
                    *p += pass;
                    *t += 1;
                }
                _ => groups.push((key, pass, 1)),
            }
        }
        let mut out = String::new();
        for (g, p, t) in &groups {
            let tag = if p == t { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{tag} {g}: {p}/{t}");
        }
        for c in self.checks.iter().filter(|c| c.status == Status::Fail) {
            let _ = writeln!(out, "failed {} ({})", c.id, c.reference);
            if let Some(w) = &c.witness {
                for (k, v) in &w.inputs {
                    let _ = writeln!(out, "    {k} = {v}");
                }
                if let Some(e) = &w.error {
                    let _ = writeln!(out, "    error: {e}");
                }
                let _ = writeln!(out, "    rerun: {}", w.reproduce);
            }
        }
        let _ = writeln!(
            out,
            "{} suite `{}` seed {}: {} passed, {} failed",
            self.tool, self.suite, self.seed, self.summary.passed, self.summary.failed
        );
        out
    }
}
