//! Deciding `G -> (H)_q`, extending partial colorings and extracting minimal
//! Ramsey subgraphs.

mod dimacs;
pub mod engine;
mod minimal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::pattern::ColoringError;
use crate::graph::{copy_edge_sets, EdgeColoring, EdgeId, Graph, Vertex};

pub use dimacs::to_dimacs;
pub use engine::{Budget, Outcome, Problem, SearchStats};
pub use minimal::{is_minimal, minimalize, MinimalityResult, MinimalityVerdict, Minimalized, MinimizeError};
pub use crate::graph::{min_degree_stats, DegreeStats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrowError {
    #[error("host graph has no edges")]
    EmptyHost,
    #[error("target graph has no edges")]
    EmptyTarget,
    #[error("q = {0} is out of range (need 2..=32)")]
    BadQ(u8),
    #[error("target has isolated vertex {0}")]
    IsolatedVertex(Vertex),
    #[error("partial coloring has {found} entries, host has {expected} edges")]
    SizeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Engine settings shared by every search entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub budget: Budget,
    /// `1` gives a deterministic search.
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: Budget::UNLIMITED, workers: 1 }
    }
}

impl SolveOptions {
    pub fn with_budget(budget: Budget) -> Self {
        SolveOptions { budget, workers: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Arrows,
    DoesNotArrow,
    #[serde(rename = "unknown_budget_exhausted")]
    Unknown,
}

fn check_q(q: u8) -> Result<(), ArrowError> {
    if (2..=32).contains(&q) {
        Ok(())
    } else {
        Err(ArrowError::BadQ(q))
    }
}

fn to_u32(copies: &[Vec<EdgeId>]) -> Vec<Vec<u32>> {
    copies.iter().map(|c| c.iter().map(|e| e.0).collect()).collect()
}

/// A host, a target, the distinct copies of the target, and a budget.
#[derive(Clone, Debug)]
pub struct ArrowInstance {
    pub host: Graph,
    pub target: Graph,
    pub q: u8,
    pub copies: Vec<Vec<EdgeId>>,
    pub budget: Budget,
}

impl ArrowInstance {
    pub fn new(host: Graph, target: Graph, q: u8, budget: Budget) -> Result<Self, ArrowError> {
        check_q(q)?;
        if host.m() == 0 {
            return Err(ArrowError::EmptyHost);
        }
        if target.m() == 0 {
            return Err(ArrowError::EmptyTarget);
        }
        let copies = copy_edge_sets(&host, &target);
        Ok(ArrowInstance { host, target, q, copies, budget })
    }

    pub fn problem(&self, fixed: Vec<Option<u8>>) -> Problem {
        Problem::new(self.host.m(), self.q, to_u32(&self.copies), fixed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowResult {
    pub verdict: Verdict,
    /// H-free total coloring, present exactly when the verdict is `DoesNotArrow`.
    pub witness: Option<EdgeColoring>,
    pub stats: SearchStats,
}

/// Decides whether every `q`-coloring of the host has a monochromatic target copy.
pub fn arrows(inst: &ArrowInstance, workers: usize) -> ArrowResult {
    let p = inst.problem(vec![None; inst.host.m()]);
    let (outcome, stats) = engine::solve(&p, inst.budget, workers);
    let (verdict, witness) = match outcome {
        Outcome::Found(c) => {
            let w = EdgeColoring::total(inst.q, c).expect("engine colors are in range");
            assert!(w.monochromatic_copy(&inst.copies).is_none(), "witness re-check failed");
            (Verdict::DoesNotArrow, Some(w))
        }
        Outcome::Exhausted => (Verdict::Arrows, None),
        Outcome::Unknown => (Verdict::Unknown, None),
    };
    ArrowResult { verdict, witness, stats }
}

/// Convenience wrapper around [`ArrowInstance`] and [`arrows`].
pub fn check_arrows(host: &Graph, target: &Graph, q: u8, opts: SolveOptions) -> Result<ArrowResult, ArrowError> {
    let inst = ArrowInstance::new(host.clone(), target.clone(), q, opts.budget)?;
    Ok(arrows(&inst, opts.workers))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendVerdict {
    Extendable,
    NotExtendable,
    #[serde(rename = "unknown_budget_exhausted")]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendResult {
    pub verdict: ExtendVerdict,
    /// Total H-free extension when extendable.
    pub witness: Option<EdgeColoring>,
    /// A copy that is already monochromatic under the partial coloring.
    pub monochromatic_copy: Option<Vec<EdgeId>>,
    pub stats: SearchStats,
}

/// Searches for an H-free total coloring agreeing with `partial`, where
/// `copies` are the hyperedges to keep non-monochromatic.
pub fn extend_with_copies(partial: &EdgeColoring, copies: &[Vec<EdgeId>], opts: SolveOptions) -> ExtendResult {
    if let Some(copy) = partial.monochromatic_copy(copies) {
        let full = copy.iter().all(|&e| partial.get(e).is_some());
        if full {
            return ExtendResult {
                verdict: ExtendVerdict::NotExtendable,
                witness: None,
                monochromatic_copy: Some(copy.to_vec()),
                stats: SearchStats { copies: copies.len(), ..Default::default() },
            };
        }
    }
    let p = Problem::new(partial.len(), partial.q(), to_u32(copies), partial.as_slice().to_vec());
    let (outcome, stats) = engine::solve(&p, opts.budget, opts.workers);
    let (verdict, witness) = match outcome {
        Outcome::Found(c) => {
            let w = EdgeColoring::total(partial.q(), c).expect("engine colors are in range");
            assert!(w.monochromatic_copy(copies).is_none(), "extension re-check failed");
            (ExtendVerdict::Extendable, Some(w))
        }
        Outcome::Exhausted => (ExtendVerdict::NotExtendable, None),
        Outcome::Unknown => (ExtendVerdict::Unknown, None),
    };
    ExtendResult { verdict, witness, monochromatic_copy: None, stats }
}

/// True (with witness) iff `partial` extends to an H-free `q`-coloring of `host`.
pub fn extendable(
    host: &Graph,
    partial: &EdgeColoring,
    target: &Graph,
    opts: SolveOptions,
) -> Result<ExtendResult, ArrowError> {
    check_q(partial.q())?;
    if partial.len() != host.m() {
        return Err(ArrowError::SizeMismatch { expected: host.m(), found: partial.len() });
    }
    if target.m() == 0 {
        return Err(ArrowError::EmptyTarget);
    }
    let copies = copy_edge_sets(host, target);
    Ok(extend_with_copies(partial, &copies, opts))
}

/// `q(δ(H) - 1) + 1`.
pub fn sq_lower_bound(h: &Graph, q: u8) -> Result<usize, ArrowError> {
    if let Some(v) = h.vertices().find(|&v| h.degree(v) == 0) {
        return Err(ArrowError::IsolatedVertex(v));
    }
    Ok(q as usize * (h.min_degree() - 1) + 1)
}

/// Witness serialization: a JSON array of `[edge_id, color]` pairs.
pub fn witness_json(c: &EdgeColoring) -> serde_json::Value {
    serde_json::Value::Array(
        c.pairs().into_iter().map(|(e, col)| serde_json::json!([e.0, col])).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn small_arrowing_facts() {
        let k3 = families::complete(3);
        let r6 = check_arrows(&families::complete(6), &k3, 2, SolveOptions::default()).unwrap();
        assert_eq!(r6.verdict, Verdict::Arrows);
        let r5 = check_arrows(&families::complete(5), &k3, 2, SolveOptions::default()).unwrap();
        assert_eq!(r5.verdict, Verdict::DoesNotArrow);
        let star = check_arrows(&families::star(5), &families::star(3), 2, SolveOptions::default()).unwrap();
        assert_eq!(star.verdict, Verdict::Arrows);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(sq_lower_bound(&families::complete(3), 2), Ok(3));
        assert_eq!(sq_lower_bound(&families::cycle(4), 2), Ok(3));
        assert_eq!(sq_lower_bound(&families::path(4), 2), Ok(1));
        let iso = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(sq_lower_bound(&iso, 2), Err(ArrowError::IsolatedVertex(2)));
    }

    #[test]
    fn extension_cases() {
        let k5 = families::complete(5);
        let k3 = families::complete(3);
        let empty = EdgeColoring::uncolored(2, k5.m());
        let r = extendable(&k5, &empty, &k3, SolveOptions::default()).unwrap();
        assert_eq!(r.verdict, ExtendVerdict::Extendable);
        let total = r.witness.unwrap();
        let again = extendable(&k5, &total, &k3, SolveOptions::default()).unwrap();
        assert_eq!(again.witness.as_ref(), Some(&total));
        let mut bad = EdgeColoring::uncolored(2, k5.m());
        for e in [(0, 1), (0, 2), (1, 2)] {
            bad.set(k5.edge_id(e.0, e.1).unwrap(), 1).unwrap();
        }
        let r = extendable(&k5, &bad, &k3, SolveOptions::default()).unwrap();
        assert_eq!(r.verdict, ExtendVerdict::NotExtendable);
        assert_eq!(r.monochromatic_copy.unwrap().len(), 3);
    }

    #[test]
    fn witness_serializes_as_pairs() {
        let c = EdgeColoring::total(2, vec![1, 0]).unwrap();
        assert_eq!(witness_json(&c).to_string(), "[[0,1],[1,0]]");
    }
}
