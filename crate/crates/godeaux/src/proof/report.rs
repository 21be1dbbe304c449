use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::nodes::NodeKind;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    ContradictionAsExpected,
    AxiomAssumed,
    Failed,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::ContradictionAsExpected => "contradiction-as-expected",
            Status::AxiomAssumed => "axiom-assumed",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeResult {
    pub id: String,
    pub kind: NodeKind,
    pub title: String,
    pub depends_on: Vec<String>,
    pub status: Status,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomEntry {
    pub id: String,
    pub statement: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub verdict: Verdict,
    pub nodes: usize,
    pub verified: usize,
    pub contradiction_as_expected: usize,
    pub axiom_assumed: usize,
    pub failed: usize,
    pub failed_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub target: String,
    pub fixtures: String,
    pub summary: Summary,
    pub axioms: Vec<AxiomEntry>,
    pub nodes: Vec<NodeResult>,
}

impl Report {
    pub fn new(target: String, fixtures: String, nodes: Vec<NodeResult>, axioms: Vec<AxiomEntry>) -> Self {
        let count = |s: Status| nodes.iter().filter(|n| n.status == s).count();
        let failed_ids: Vec<String> = nodes.iter().filter(|n| n.status == Status::Failed).map(|n| n.id.clone()).collect();
        let summary = Summary {
            verdict: if failed_ids.is_empty() { Verdict::Verified } else { Verdict::Failed },
            nodes: nodes.len(),
            verified: count(Status::Verified),
            contradiction_as_expected: count(Status::ContradictionAsExpected),
            axiom_assumed: count(Status::AxiomAssumed),
            failed: failed_ids.len(),
            failed_ids,
        };
        Report { schema_version: SCHEMA_VERSION, target, fixtures, summary, axioms, nodes }
    }

    pub fn node(&self, id: &str) -> Option<&NodeResult> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn verified(&self) -> bool {
        self.summary.verdict == Verdict::Verified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema_version {}", self.schema_version);
        let _ = writeln!(s, "target {} (fixtures: {})", self.target, self.fixtures);
        let w = self.nodes.iter().map(|n| n.id.len()).max().unwrap_or(0);
        for n in &self.nodes {
            let _ = writeln!(s, "{:<27} {:<w$}  {}", format!("[{}]", n.status.as_str()), n.id, n.summary);
            if let Some(r) = &n.reason {
                let _ = writeln!(s, "{:<27} {:<w$}  -> {}", "", "", r);
            }
        }
        let _ = writeln!(s, "axioms:");
        for a in &self.axioms {
            let _ = writeln!(s, "  {}: {} [{}]", a.id, a.statement, a.citation);
        }
        let m = &self.summary;
        let _ = write!(
            s,
            "verdict: {} ({} nodes: {} verified, {} contradiction-as-expected, {} axiom-assumed, {} failed",
            match m.verdict {
                Verdict::Verified => "verified",
                Verdict::Failed => "failed",
            },
            m.nodes,
            m.verified,
            m.contradiction_as_expected,
            m.axiom_assumed,
            m.failed
        );
        if !m.failed_ids.is_empty() {
            let _ = write!(s, ": {}", m.failed_ids.join(", "));
        }
        s.push_str(")\n");
        s
    }
}
