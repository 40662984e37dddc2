//! Check entries and reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::symbolic::{Aggregate, ZeroVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    /// Exact symbolic identity.
    Proved,
    /// Held at every sample point within tolerance.
    Numeric,
    Failed,
    /// Not checked; reason in the detail.
    Skipped,
    /// Taken on trust from the manifest.
    Attested,
    /// Informational; never affects the outcome.
    Info,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Proved => "PROVED",
            Status::Numeric => "NUMERIC",
            Status::Failed => "FAILED",
            Status::Skipped => "SKIPPED",
            Status::Attested => "ATTESTED",
            Status::Info => "INFO",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    pub point: Vec<(String, f64)>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub attestations: Vec<String>,
    #[serde(skip)]
    pub elapsed_us: u64,
}

impl Entry {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Entry {
            id: id.into(),
            anchor: anchor.into(),
            status,
            detail: detail.into(),
            witness: None,
            attestations: Vec::new(),
            elapsed_us: 0,
        }
    }

    pub fn from_aggregate(id: impl Into<String>, anchor: impl Into<String>, agg: &Aggregate) -> Self {
        let (status, detail, witness) = match &agg.verdict {
            ZeroVerdict::ExactZero => (Status::Proved, "exact zero".to_string(), None),
            ZeroVerdict::NumericZero { max_abs } => (
                Status::Numeric,
                format!("zero at all samples, max |residual| = {max_abs:.3e}"),
                None,
            ),
            ZeroVerdict::NonZero { point, value } => (
                Status::Failed,
                match &agg.offender {
                    Some(c) => format!("nonzero residual in {c}"),
                    None => "nonzero residual".to_string(),
                },
                Some(Witness {
                    component: agg.offender.clone(),
                    point: point.clone(),
                    value: *value,
                }),
            ),
        };
        Entry {
            witness,
            ..Entry::new(id, anchor, status, detail)
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }

    pub fn with_attestation(mut self, name: impl Into<String>) -> Self {
        self.attestations.push(name.into());
        self
    }
}

/// An ordered list of entries produced by one or more checks.
#[derive(Clone, Debug)]
pub struct Checks {
    pub entries: Vec<Entry>,
    clock: Instant,
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            entries: Vec::new(),
            clock: Instant::now(),
        }
    }
}

impl Checks {
    pub fn new() -> Self {
        Checks::default()
    }

    pub fn push(&mut self, mut e: Entry) -> bool {
        let now = Instant::now();
        e.elapsed_us = now.duration_since(self.clock).as_micros() as u64;
        self.clock = now;
        let ok = e.passed();
        self.entries.push(e);
        ok
    }

    /// Records a zero-class requirement; returns whether it held.
    pub fn verdict(&mut self, id: &str, anchor: &str, agg: &Aggregate) -> bool {
        self.push(Entry::from_aggregate(id, anchor, agg))
    }

    pub fn pass(&mut self, id: &str, anchor: &str, status: Status, detail: impl Into<String>) -> bool {
        self.push(Entry::new(id, anchor, status, detail))
    }

    pub fn fail(&mut self, id: &str, anchor: &str, detail: impl Into<String>) -> bool {
        self.push(Entry::new(id, anchor, Status::Failed, detail))
    }

    pub fn skip(&mut self, id: &str, anchor: &str, reason: impl Into<String>) {
        self.push(Entry::new(id, anchor, Status::Skipped, reason));
    }

    pub fn info(&mut self, id: &str, anchor: &str, detail: impl Into<String>) {
        self.push(Entry::new(id, anchor, Status::Info, detail));
    }

    pub fn attest(&mut self, id: &str, anchor: &str, name: &str, attested: bool) -> bool {
        if attested {
            self.push(
                Entry::new(id, anchor, Status::Attested, "declared by the manifest").with_attestation(name),
            )
        } else {
            self.push(Entry::new(id, anchor, Status::Skipped, "not attested; unchecked"))
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(Entry::passed)
    }

    pub fn first_failure(&self) -> Option<&Entry> {
        self.entries.iter().find(|e| !e.passed())
    }

    pub fn find(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn extend(&mut self, prefix: &str, other: Checks) {
        for mut e in other.entries {
            if !prefix.is_empty() {
                e.id = format!("{prefix}.{}", e.id);
            }
            self.entries.push(e);
        }
        self.clock = Instant::now();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Overall {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub attestation: String,
    pub consumed_by: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub status: Overall,
    pub entries: Vec<Entry>,
    pub attestations: Vec<LedgerEntry>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub artifacts: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(checks: Checks, artifacts: BTreeMap<String, serde_json::Value>) -> Self {
        let entries = checks.entries;
        let status = if entries.is_empty() {
            Overall::Vacuous
        } else if entries.iter().all(Entry::passed) {
            Overall::Pass
        } else {
            Overall::Fail
        };
        let mut ledger: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for e in &entries {
            for a in &e.attestations {
                ledger.entry(a.clone()).or_default().push(e.id.clone());
            }
        }
        Report {
            version: 1,
            status,
            entries,
            attestations: ledger
                .into_iter()
                .map(|(attestation, consumed_by)| LedgerEntry {
                    attestation,
                    consumed_by,
                })
                .collect(),
            artifacts,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Overall::Pass
    }

    pub fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_json(&self, timings: bool) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if timings {
            if let Some(list) = value.get_mut("entries").and_then(|v| v.as_array_mut()) {
                for (v, e) in list.iter_mut().zip(&self.entries) {
                    v["elapsed_us"] = serde_json::json!(e.elapsed_us);
                }
            }
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        let width = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
        for e in &self.entries {
            let _ = write!(out, "{:<8} {:<width$}  {}", e.status.label(), e.id, e.anchor);
            if !e.detail.is_empty() {
                let _ = write!(out, "  [{}]", e.detail);
            }
            if timings {
                let _ = write!(out, "  ({:.1} ms)", e.elapsed_us as f64 / 1000.0);
            }
            out.push('\n');
            if let Some(w) = &e.witness {
                let pt: Vec<String> = w.point.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
                let _ = writeln!(
                    out,
                    "         witness{}: value {:.6e} at {{{}}}",
                    w.component.as_ref().map(|c| format!(" ({c})")).unwrap_or_default(),
                    w.value,
                    pt.join(", ")
                );
            }
        }
        if !self.attestations.is_empty() {
            out.push_str("attestations:\n");
            for l in &self.attestations {
                let _ = writeln!(out, "  {} <- {}", l.attestation, l.consumed_by.join(", "));
            }
        }
        for (k, v) in &self.artifacts {
            let _ = writeln!(out, "artifact {k}: {v}");
        }
        let _ = writeln!(
            out,
            "status: {}",
            match self.status {
                Overall::Pass => "PASS",
                Overall::Fail => "FAIL",
                Overall::Vacuous => "VACUOUS",
            }
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status() {
        assert_eq!(Report::new(Checks::new(), BTreeMap::new()).status, Overall::Vacuous);
        let mut c = Checks::new();
        c.pass("a", "x", Status::Proved, "");
        c.skip("b", "y", "no data");
        assert_eq!(Report::new(c.clone(), BTreeMap::new()).status, Overall::Pass);
        c.fail("c", "z", "boom");
        assert_eq!(Report::new(c, BTreeMap::new()).status, Overall::Fail);
    }

    #[test]
    fn ledger_lists_consumers() {
        let mut c = Checks::new();
        c.attest("act.free", "free action", "free:rot", true);
        c.attest("act.proper", "proper action", "proper:rot", false);
        let r = Report::new(c, BTreeMap::new());
        assert_eq!(r.attestations.len(), 1);
        assert_eq!(r.attestations[0].consumed_by, vec!["act.free".to_string()]);
        assert!(!r.to_json(false).contains("elapsed"));
        assert!(r.to_json(true).contains("elapsed_us"));
    }
}
