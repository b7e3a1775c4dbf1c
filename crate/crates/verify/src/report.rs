//! Per-claim verification reports with witnesses and exact numbers, plus
//! deterministic JSON and CSV rendering.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    IncompleteUniverse,
}

impl Verdict {
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (IncompleteUniverse, _) | (_, IncompleteUniverse) => IncompleteUniverse,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Pass,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
            Verdict::IncompleteUniverse => "incomplete-universe",
        }
    }
}

/// A witness, counterexample or finding attached to a report. Findings carry
/// computed-vs-expected data for claims that compare against written values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    pub description: String,
    pub data: BTreeMap<String, String>,
}

impl Witness {
    pub fn new(kind: &str, description: impl Into<String>) -> Witness {
        Witness {
            kind: kind.into(),
            description: description.into(),
            data: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Witness {
        self.data.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniverseDesc {
    pub degrees: Vec<u64>,
    pub description: String,
}

/// One verified claim instance (typically one claim at one degree/domain).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub universe: UniverseDesc,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub numbers: BTreeMap<String, String>,
    pub runtime_ms: u64,
    pub tier: u8,
    pub completeness: String,
}

impl ClaimReport {
    pub fn new(claim: &str, degrees: Vec<u64>, description: impl Into<String>) -> ClaimReport {
        ClaimReport {
            claim: claim.into(),
            universe: UniverseDesc {
                degrees,
                description: description.into(),
            },
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            numbers: BTreeMap::new(),
            runtime_ms: 0,
            tier: 1,
            completeness: "complete".into(),
        }
    }

    pub fn set_number(&mut self, key: &str, value: impl ToString) {
        self.numbers.insert(key.into(), value.to_string());
    }

    pub fn merge_verdict(&mut self, v: Verdict) {
        self.verdict = self.verdict.combine(v);
    }
}

/// The full output of a run: reports sorted by (claim, degrees).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub reports: Vec<ClaimReport>,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

impl RunReport {
    pub fn new(mut reports: Vec<ClaimReport>) -> RunReport {
        reports.sort_by(|a, b| {
            a.claim
                .cmp(&b.claim)
                .then_with(|| a.universe.degrees.cmp(&b.universe.degrees))
                .then_with(|| a.universe.description.cmp(&b.universe.description))
        });
        RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            reports,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Byte-stable copy with runtimes zeroed, for determinism comparisons.
    pub fn normalized(&self) -> RunReport {
        let mut out = self.clone();
        for r in &mut out.reports {
            r.runtime_ms = 0;
        }
        out
    }

    pub fn worst_verdict(&self) -> Verdict {
        self.reports
            .iter()
            .fold(Verdict::Pass, |acc, r| acc.combine(r.verdict))
    }

    /// CSV summary: one row per (degree, claim).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,claim,verdict,tier,completeness,detail\n");
        for r in &self.reports {
            let detail = r
                .numbers
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            let degrees = if r.universe.degrees.is_empty() {
                "-".to_string()
            } else {
                r.universe
                    .degrees
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("+")
            };
            out.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                degrees,
                r.claim,
                r.verdict.as_str(),
                r.tier,
                r.completeness,
                detail.replace('"', "'")
            ));
        }
        out
    }

    /// Human-readable text table; table1 reports render as the two-column
    /// (degree, largest order) layout.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let table1: Vec<&ClaimReport> = self.reports.iter().filter(|r| r.claim == "table1").collect();
        if !table1.is_empty() {
            out.push_str("degree | largest |H|\n");
            out.push_str("-------+------------\n");
            for r in &table1 {
                let degree = r.universe.degrees.first().copied().unwrap_or(0);
                let value = r
                    .numbers
                    .get("largest_nilpotent_order")
                    .cloned()
                    .unwrap_or_else(|| "?".into());
                out.push_str(&format!("{degree:>6} | {value}\n"));
            }
            out.push('\n');
        }
        for r in &self.reports {
            if r.claim == "table1" {
                continue;
            }
            out.push_str(&format!(
                "{}: {} [{}] ({} witnesses)\n",
                r.claim,
                r.verdict.as_str(),
                r.universe.description,
                r.witnesses.len()
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_combination_is_severity_ordered() {
        use Verdict::*;
        assert_eq!(Pass.combine(Fail), Fail);
        assert_eq!(IncompleteUniverse.combine(Fail), Fail);
        assert_eq!(Pass.combine(Indeterminate), Indeterminate);
        assert_eq!(Indeterminate.combine(IncompleteUniverse), IncompleteUniverse);
        assert_eq!(Pass.combine(Pass), Pass);
    }

    #[test]
    fn normalization_zeroes_runtime_only() {
        let mut r = ClaimReport::new("lemma24", vec![4], "test");
        r.runtime_ms = 99;
        r.set_number("x", 7);
        let run = RunReport::new(vec![r]);
        let norm = run.normalized();
        assert_eq!(norm.reports[0].runtime_ms, 0);
        assert_eq!(norm.reports[0].numbers["x"], "7");
        assert_eq!(run.normalized().to_json(), norm.to_json());
    }

    #[test]
    fn csv_has_row_per_report() {
        let run = RunReport::new(vec![
            ClaimReport::new("lemma24", vec![4], "a"),
            ClaimReport::new("lemma24", vec![8], "b"),
        ]);
        let csv = run.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("degree,claim,verdict"));
    }
}
