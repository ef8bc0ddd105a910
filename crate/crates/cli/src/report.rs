use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use ramsey_core::gadgets::{Overall, VerificationReport};
use ramsey_core::graph::EdgeColoring;
use ramsey_core::Graph;
use serde::Serialize;
use serde_json::{json, Value};

use crate::select::g6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Succeeded,
    Refuted,
    #[serde(rename = "unknown_budget_exhausted")]
    Unknown,
    Incomplete,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Verified | Outcome::Succeeded => 0,
            Outcome::Refuted => 1,
            Outcome::Unknown | Outcome::Incomplete => 2,
        }
    }

    pub fn of(r: &VerificationReport) -> Self {
        match r.overall() {
            Overall::Verified => Outcome::Verified,
            Overall::Refuted => Outcome::Refuted,
            Overall::Unknown => Outcome::Unknown,
            Overall::Incomplete => Outcome::Incomplete,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Value,
    pub outcome: Outcome,
    pub exit_code: u8,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, parameters: Value, outcome: Outcome, result: Value) -> Self {
        Report {
            tool: "ramsey",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters,
            outcome,
            exit_code: outcome.exit_code(),
            result,
        }
    }

    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// A graph with its edge list, so edge ids in colorings resolve against it.
pub fn graph_json(g: &Graph) -> Value {
    json!({ "graph6": g6(g), "n": g.n(), "m": g.m(), "edges": g.edges() })
}

/// `[u, v, color]` triples for every colored edge.
pub fn coloring_json(g: &Graph, c: &EdgeColoring) -> Value {
    Value::Array(
        c.pairs()
            .into_iter()
            .map(|(e, col)| {
                let (u, v) = g.endpoints(e);
                json!([u, v, col])
            })
            .collect(),
    )
}
