use serde::{Deserialize, Serialize};

use super::{check_q, engine, to_u32, ArrowError, Outcome, Problem, SearchStats, SolveOptions};
use crate::graph::{copy_edge_sets, EdgeColoring, EdgeId, Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MinimalityVerdict {
    Minimal,
    /// The graph itself has an H-free coloring.
    NotArrowing,
    /// Deleting this edge (id in the graph after isolated vertices are dropped) keeps arrowing.
    RemovableEdge { edge: EdgeId },
    #[serde(rename = "unknown_budget_exhausted")]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityResult {
    pub verdict: MinimalityVerdict,
    /// The checked graph: the input without isolated vertices.
    pub graph: Graph,
    /// Witness for `NotArrowing`.
    pub witness: Option<EdgeColoring>,
    /// For each edge checked, an H-free coloring of the graph minus that edge
    /// (indexed like `graph` with that edge left uncolored).
    pub edge_witnesses: Vec<(EdgeId, EdgeColoring)>,
    pub stats: SearchStats,
}

fn without_edge(copies: &[Vec<u32>], e: u32) -> Vec<Vec<u32>> {
    copies.iter().filter(|c| !c.contains(&e)).cloned().collect()
}

fn add(stats: &mut SearchStats, s: SearchStats) {
    stats.nodes += s.nodes;
    stats.copies = stats.copies.max(s.copies);
    stats.workers = stats.workers.max(s.workers);
}

/// Solves the graph minus edge `e`, keeping ids: `e` becomes a free edge in
/// no hyperedge, so its color is irrelevant and fixed to 0.
fn solve_without(m: usize, q: u8, copies: &[Vec<u32>], e: u32, opts: SolveOptions) -> (Outcome, SearchStats) {
    let mut fixed = vec![None; m];
    fixed[e as usize] = Some(0);
    let p = Problem::new(m, q, without_edge(copies, e), fixed);
    engine::solve(&p, opts.budget, opts.workers)
}

/// Arrows `H`, and no single-edge deletion does. Isolated vertices are dropped first.
pub fn is_minimal(g: &Graph, h: &Graph, q: u8, opts: SolveOptions) -> Result<MinimalityResult, ArrowError> {
    check_q(q)?;
    if h.m() == 0 {
        return Err(ArrowError::EmptyTarget);
    }
    let (g, _) = g.drop_isolated();
    let copies = to_u32(&copy_edge_sets(&g, h));
    let mut stats = SearchStats::default();
    let result = |verdict, witness, edge_witnesses, stats| {
        Ok(MinimalityResult { verdict, graph: g.clone(), witness, edge_witnesses, stats })
    };
    let p = Problem::new(g.m(), q, copies.clone(), vec![None; g.m()]);
    let (o, s) = engine::solve(&p, opts.budget, opts.workers);
    add(&mut stats, s);
    match o {
        Outcome::Found(c) => {
            let w = EdgeColoring::total(q, c).expect("in range");
            return result(MinimalityVerdict::NotArrowing, Some(w), Vec::new(), stats);
        }
        Outcome::Unknown => return result(MinimalityVerdict::Unknown, None, Vec::new(), stats),
        Outcome::Exhausted => {}
    }
    let mut witnesses = Vec::with_capacity(g.m());
    for e in 0..g.m() as u32 {
        let (o, s) = solve_without(g.m(), q, &copies, e, opts);
        add(&mut stats, s);
        match o {
            Outcome::Found(c) => {
                let mut w = EdgeColoring::total(q, c).expect("in range");
                w.clear(EdgeId(e));
                witnesses.push((EdgeId(e), w));
            }
            Outcome::Exhausted => {
                return result(MinimalityVerdict::RemovableEdge { edge: EdgeId(e) }, None, witnesses, stats)
            }
            Outcome::Unknown => return result(MinimalityVerdict::Unknown, None, witnesses, stats),
        }
    }
    result(MinimalityVerdict::Minimal, None, witnesses, stats)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimalized {
    /// Minimal subgraph with isolated vertices removed; `None` when a check ran out of budget.
    pub graph: Option<Graph>,
    /// Input edge ids kept, ascending.
    pub kept_edges: Vec<EdgeId>,
    /// Input vertex of each vertex of `graph`.
    pub vertex_map: Vec<Vertex>,
    pub stats: SearchStats,
}

/// Greedily deletes edges in ascending id order while arrowing is preserved.
///
/// One pass suffices: an edge that cannot be deleted at its turn cannot be
/// deleted later either, since arrowing is monotone under subgraphs.
/// Returns an error when the input does not arrow `H`.
pub fn minimalize(g: &Graph, h: &Graph, q: u8, opts: SolveOptions) -> Result<Minimalized, MinimizeError> {
    check_q(q)?;
    if h.m() == 0 {
        return Err(ArrowError::EmptyTarget.into());
    }
    let mut copies = to_u32(&copy_edge_sets(g, h));
    let m = g.m();
    let mut stats = SearchStats::default();
    let p = Problem::new(m, q, copies.clone(), vec![None; m]);
    let (o, s) = engine::solve(&p, opts.budget, opts.workers);
    add(&mut stats, s);
    match o {
        Outcome::Found(_) => return Err(MinimizeError::NotArrowing),
        Outcome::Unknown => {
            return Ok(Minimalized { graph: None, kept_edges: Vec::new(), vertex_map: Vec::new(), stats })
        }
        Outcome::Exhausted => {}
    }
    let mut removed = vec![false; m];
    for e in 0..m as u32 {
        // Deleted edges stay as free edges with no hyperedges; fix them so they do not branch.
        let mut fixed = vec![None; m];
        for (i, r) in removed.iter().enumerate() {
            if *r {
                fixed[i] = Some(0);
            }
        }
        fixed[e as usize] = Some(0);
        let trial = without_edge(&copies, e);
        let p = Problem::new(m, q, trial.clone(), fixed);
        let (o, s) = engine::solve(&p, opts.budget, opts.workers);
        add(&mut stats, s);
        match o {
            Outcome::Exhausted => {
                removed[e as usize] = true;
                copies = trial;
            }
            Outcome::Found(_) => {}
            Outcome::Unknown => {
                return Ok(Minimalized { graph: None, kept_edges: Vec::new(), vertex_map: Vec::new(), stats })
            }
        }
    }
    let kept_edges: Vec<EdgeId> = g.edge_ids().filter(|e| !removed[e.index()]).collect();
    let (graph, vertex_map) = g.edge_subgraph(&kept_edges).drop_isolated();
    Ok(Minimalized { graph: Some(graph), kept_edges, vertex_map, stats })
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MinimizeError {
    #[error("input graph does not arrow the target")]
    NotArrowing,
    #[error(transparent)]
    Arrow(#[from] ArrowError),
}
