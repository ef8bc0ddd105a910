use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Distance, EdgeColoring, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyStatus {
    /// Checked exhaustively and holds.
    Pass,
    /// Refuted; the result carries a counterexample.
    Fail,
    /// Holds on every case checked, but not every case was checked.
    Partial,
    /// Not checked semantically because the gadget contains stub senders.
    StructuralOnly,
    #[serde(rename = "unknown_budget_exhausted")]
    BudgetExhausted,
}

/// Case coverage of an enumerated property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub checked: u64,
    pub total: u64,
    /// Cases were drawn at random rather than enumerated in order.
    pub sampled: bool,
}

/// Re-checkable evidence attached to a property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `[edge, color]` pairs of a (possibly partial) coloring of the gadget.
    Coloring { pairs: Vec<(u32, u8)> },
    /// The partial coloring has no H-free extension; the search visited
    /// `nodes` decisions before exhausting.
    NotExtendable { pairs: Vec<(u32, u8)>, nodes: u64 },
    /// Exhaustive search found no coloring with the requested constraints.
    Exhausted { nodes: u64 },
    Distance { found: Distance, required: usize },
    /// Vertices of a subgraph that should be induced but is not.
    NotInduced { vertices: Vec<Vertex> },
    Counts { expected: BTreeMap<String, usize>, found: BTreeMap<String, usize> },
    Robustness(super::RobustViolation),
}

impl Evidence {
    pub fn coloring(c: &EdgeColoring) -> Self {
        Evidence::Coloring { pairs: c.pairs().into_iter().map(|(e, k)| (e.0, k)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub status: PropertyStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
    /// Supporting evidence for a pass (for example an H-free coloring).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Evidence>,
}

impl PropertyResult {
    pub fn new(name: &str, status: PropertyStatus, detail: impl Into<String>) -> Self {
        PropertyResult {
            name: name.to_string(),
            status,
            detail: detail.into(),
            coverage: None,
            witness: None,
            counterexample: None,
        }
    }

    pub fn witness(mut self, e: Evidence) -> Self {
        self.witness = Some(e);
        self
    }

    pub fn counterexample(mut self, e: Evidence) -> Self {
        self.counterexample = Some(e);
        self
    }

    pub fn coverage(mut self, c: Coverage) -> Self {
        self.coverage = Some(c);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    /// Every property passed exhaustively.
    Verified,
    /// Some property failed.
    Refuted,
    /// No failure, but some check ran out of budget.
    #[serde(rename = "unknown_budget_exhausted")]
    Unknown,
    /// No failure, but some property was only checked structurally or partially.
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub parameters: serde_json::Value,
    pub properties: Vec<PropertyResult>,
    /// Total engine decisions across all checks.
    pub nodes: u64,
}

impl VerificationReport {
    pub fn new(subject: &str, parameters: serde_json::Value) -> Self {
        VerificationReport { subject: subject.to_string(), parameters, properties: Vec::new(), nodes: 0 }
    }

    pub fn push(&mut self, p: PropertyResult) {
        self.properties.push(p);
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn status_of(&self, name: &str) -> Option<PropertyStatus> {
        self.get(name).map(|p| p.status)
    }

    pub fn overall(&self) -> Overall {
        let has = |s| self.properties.iter().any(|p| p.status == s);
        if has(PropertyStatus::Fail) {
            Overall::Refuted
        } else if has(PropertyStatus::BudgetExhausted) {
            Overall::Unknown
        } else if has(PropertyStatus::StructuralOnly) || has(PropertyStatus::Partial) {
            Overall::Incomplete
        } else {
            Overall::Verified
        }
    }

    /// One line per property, for terminals and logs.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {:?}\n", self.subject, self.overall());
        for p in &self.properties {
            let status = serde_json::to_value(p.status).unwrap();
            out.push_str(&format!("  {:<10} {:<26} {}\n", p.name, status.as_str().unwrap_or(""), p.detail));
        }
        out
    }
}
