//! Verification reports: one entry per check, rendered as text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    #[serde(rename = "certified")]
    Certified,
    #[serde(rename = "inconclusive-at-truncation")]
    Inconclusive,
    #[serde(rename = "refuted")]
    Refuted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Inconclusive => "inconclusive-at-truncation",
            Verdict::Refuted => "refuted",
        }
    }

    /// Certified if every condition holds, refuted on an exact
    /// counterexample, inconclusive otherwise.
    pub fn from_flags(ok: bool, counterexample: bool) -> Verdict {
        if counterexample {
            Verdict::Refuted
        } else if ok {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("grading {0} is not in ker mu")]
    NotInKernel(String),
    #[error("element {0} is not in H^(1)")]
    NotDerived(String),
    #[error("no y with <y,z> != 0 for z = {0}")]
    NoContractingElement(String),
    #[error("{0}")]
    Parameter(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub statement: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub facts: BTreeMap<String, String>,
    /// Total number of witnesses or certificates produced and re-verified.
    pub witness_count: usize,
    /// A readable sample of them.
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

/// How many witnesses are printed per entry.
pub const WITNESS_SAMPLE: usize = 3;

impl CheckEntry {
    pub fn new(id: &str, statement: &str) -> Self {
        CheckEntry {
            id: id.into(),
            statement: statement.into(),
            params: BTreeMap::new(),
            verdict: Verdict::Certified,
            facts: BTreeMap::new(),
            witness_count: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn fact(&mut self, k: &str, v: impl ToString) {
        self.facts.insert(k.into(), v.to_string());
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn witness(&mut self, w: impl FnOnce() -> String) {
        if self.witnesses.len() < WITNESS_SAMPLE {
            self.witnesses.push(w());
        }
        self.witness_count += 1;
    }

    /// Lowers the verdict; verdicts only get worse.
    pub fn demote(&mut self, v: Verdict) {
        self.verdict = self.verdict.max(v);
    }

    pub fn require(&mut self, ok: bool, on_fail: Verdict, why: impl FnOnce() -> String) {
        if !ok {
            self.demote(on_fail);
            self.notes.push(why());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub group: BTreeMap<String, String>,
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn overall(&self) -> Verdict {
        self.entries.iter().map(|e| e.verdict).max().unwrap_or(Verdict::Certified)
    }

    /// 0 certified, 2 inconclusive present, 1 refuted.
    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Verdict::Certified => 0,
            Verdict::Inconclusive => 2,
            Verdict::Refuted => 1,
        }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == v).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# verification report").unwrap();
        for (k, v) in &self.group {
            writeln!(s, "group.{k}: {v}").unwrap();
        }
        writeln!(s, "seed: {}", self.seed).unwrap();
        for e in &self.entries {
            writeln!(s).unwrap();
            writeln!(s, "== {} ==", e.id).unwrap();
            writeln!(s, "statement: {}", e.statement).unwrap();
            for (k, v) in &e.params {
                writeln!(s, "param.{k}: {v}").unwrap();
            }
            writeln!(s, "verdict: {}", e.verdict.as_str()).unwrap();
            for (k, v) in &e.facts {
                writeln!(s, "  {k}: {v}").unwrap();
            }
            writeln!(s, "  witnesses: {} (re-verified)", e.witness_count).unwrap();
            for w in &e.witnesses {
                writeln!(s, "    {w}").unwrap();
            }
            for n in &e.notes {
                writeln!(s, "  note: {n}").unwrap();
            }
        }
        writeln!(s).unwrap();
        writeln!(
            s,
            "summary: {} certified, {} inconclusive-at-truncation, {} refuted",
            self.count(Verdict::Certified),
            self.count(Verdict::Inconclusive),
            self.count(Verdict::Refuted)
        )
        .unwrap();
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
