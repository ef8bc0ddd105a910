//! Signal senders, indicators, generalized negative indicators, pattern
//! gadgets and the robustness prober.

mod gni;
mod indicator;
mod pattern;
mod report;
mod robust;
mod sender;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrowing::{engine, ArrowError, Budget, Outcome, Problem, SearchStats, SolveOptions};
use crate::graph::{GraphError, Vertex};
use crate::{GraphBuilder, Graph};

pub use gni::{build_gni, expected_gni_counts, verify_gni, GniSpec};
pub use indicator::{build_indicator, expected_indicator_counts, verify_indicator, IndicatorSpec};
pub use pattern::{build_pattern_gadget, choose_r, expected_pattern_counts, verify_pattern_gadget, PatternGadgetSpec};
pub use report::{Coverage, Evidence, Overall, PropertyResult, PropertyStatus, VerificationReport};
pub use robust::{check_robust, recheck_violation, RobustOptions, RobustViolation};
pub use sender::{
    load_sender_dir, make_stub_sender, search_sender, string_senders, verify_sender, LibraryProvider,
    SearchProvider, SenderProvider, SenderSearch, SenderSidecar, SenderSpec, StubProvider,
};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("target graph is contained in {0}")]
    TargetContained(&'static str),
    #[error("no sender available: {0}")]
    Provider(String),
    #[error("interface error: {0}")]
    Interface(String),
    #[error("built gadget failed its structural check: {0}")]
    Structure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Arrow(#[from] ArrowError),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("sidecar {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

/// How much of a gadget's contract has been checked. Ordered from weakest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Placeholder with the right interface and distance but no semantic guarantee.
    Stub,
    Unverified,
    StructurallyVerified,
    FullyVerified,
}

/// Sub-gadget bookkeeping of a built gadget.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Sub-gadgets joined directly at this level, keyed `sender+`, `sender-`,
    /// `indicator+`, `indicator-`, `gni`.
    pub direct: BTreeMap<String, usize>,
    /// Signal senders anywhere inside, keyed `sender+` and `sender-`.
    pub senders: BTreeMap<String, usize>,
    /// Nesting depth of indicator recursion (1 for a base-case indicator).
    pub depth: usize,
}

impl Provenance {
    pub(crate) fn note(&mut self, key: &str) {
        *self.direct.entry(key.to_string()).or_default() += 1;
    }

    pub(crate) fn sender(&mut self, p: Polarity) {
        let key = format!("sender{}", p.sign());
        self.note(&key);
        *self.senders.entry(key).or_default() += 1;
    }

    fn absorb(&mut self, key: &str, inner: &Provenance) {
        self.note(key);
        for (k, v) in &inner.senders {
            *self.senders.entry(k.clone()).or_default() += v;
        }
    }
}

/// Settings for the `verify_*` functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub solve: SolveOptions,
    /// Upper bound on enumerated cases per property; beyond it cases are
    /// sampled and the property is reported as partial.
    pub max_cases: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { solve: SolveOptions::default(), max_cases: 20_000, seed: 0 }
    }
}

impl VerifyOptions {
    pub fn with_budget(budget: Budget) -> Self {
        VerifyOptions { solve: SolveOptions::with_budget(budget), ..Default::default() }
    }
}

/// Positive and negative sender used throughout one construction.
#[derive(Clone, Debug)]
pub(crate) struct Senders {
    pos: SenderSpec,
    neg: SenderSpec,
}

impl Senders {
    pub(crate) fn fetch(p: &dyn SenderProvider, h: &Graph, q: u8, d: usize) -> Result<Self, GadgetError> {
        Ok(Senders {
            pos: p.sender(h, q, d, Polarity::Positive)?,
            neg: p.sender(h, q, d, Polarity::Negative)?,
        })
    }

    pub(crate) fn get(&self, p: Polarity) -> &SenderSpec {
        match p {
            Polarity::Positive => &self.pos,
            Polarity::Negative => &self.neg,
        }
    }

    pub(crate) fn status(&self) -> Status {
        if self.pos.status == Status::Stub || self.neg.status == Status::Stub {
            Status::Stub
        } else {
            Status::StructurallyVerified
        }
    }
}

/// Joins `s` so that its `e` lands on host edge `x` and its `f` on host edge `y`.
pub(crate) fn join_sender(
    b: &mut GraphBuilder,
    s: &SenderSpec,
    x: (Vertex, Vertex),
    y: (Vertex, Vertex),
    prefix: &str,
) -> Result<Vec<Vertex>, GadgetError> {
    if x.0 == y.0 || x.0 == y.1 || x.1 == y.0 || x.1 == y.1 {
        return Err(GadgetError::Interface(format!("sender ends {x:?} and {y:?} share a vertex")));
    }
    let (e0, e1) = s.graph.endpoints(s.e);
    let (f0, f1) = s.graph.endpoints(s.f);
    Ok(b.attach(&s.graph, &[(e0, x.0), (e1, x.1), (f0, y.0), (f1, y.1)], prefix)?)
}

/// Starts a builder with `f` on vertices labeled `{tag}{i}` and its edges in order.
fn start_with(b: &mut GraphBuilder, f: &Graph, tag: &str) -> Result<Vec<Vertex>, GadgetError> {
    let map = f
        .vertices()
        .map(|i| b.add_vertex(Some(format!("{tag}{i}"))))
        .collect::<Result<Vec<_>, _>>()?;
    for &(u, v) in f.edges() {
        b.add_edge(map[u as usize], map[v as usize])?;
    }
    Ok(map)
}

/// A new labeled edge on two new vertices.
fn new_edge(b: &mut GraphBuilder, tag: &str) -> Result<(Vertex, Vertex), GadgetError> {
    let u = b.add_vertex(Some(format!("{tag}.0")))?;
    let v = b.add_vertex(Some(format!("{tag}.1")))?;
    b.add_edge(u, v)?;
    Ok((u, v))
}

fn unlabeled(g: &Graph) -> Graph {
    Graph::from_edges(g.n(), g.edges()).expect("edges of a graph are valid")
}

/// True when `h` (ignoring isolated vertices) is a single cycle.
fn is_cycle(h: &Graph) -> bool {
    let (core, _) = h.drop_isolated();
    core.n() >= 3 && core.vertices().all(|v| core.degree(v) == 2) && crate::graph::is_connected(&core)
}

/// Preconditions shared by every gadget whose interface graph is `f`.
fn check_interface(h: &Graph, f: &Graph, what: &'static str) -> Result<(), GadgetError> {
    if !crate::graph::copy_edge_sets(f, h).is_empty() {
        return Err(GadgetError::TargetContained(what));
    }
    if is_cycle(h) {
        let t = h.drop_isolated().0.n();
        if !crate::graph::girth(f).at_least(t + 1) {
            return Err(GadgetError::Precondition(format!("{what} must have girth greater than {t}")));
        }
    }
    Ok(())
}

fn check_common(h: &Graph, q: u8, d: usize) -> Result<(), GadgetError> {
    if !(2..=32).contains(&q) {
        return Err(ArrowError::BadQ(q).into());
    }
    if h.m() == 0 {
        return Err(ArrowError::EmptyTarget.into());
    }
    if d == 0 {
        return Err(GadgetError::Precondition("d must be at least 1".into()));
    }
    Ok(())
}

/// Calls `f` with every restricted growth string of length `len` using at
/// most `q` symbols: one representative per coloring up to color renaming.
/// Stops when `f` returns false.
fn for_each_rgs(len: usize, q: u8, mut f: impl FnMut(&[u8]) -> bool) {
    if len == 0 {
        f(&[]);
        return;
    }
    let mut s = vec![0u8; len];
    let mut max = vec![0u8; len];
    loop {
        if !f(&s) {
            return;
        }
        // increment the rightmost position that can grow
        let mut i = len - 1;
        loop {
            let limit = if i == 0 { 0 } else { max[i - 1] + 1 };
            if s[i] < limit && s[i] + 1 < q {
                s[i] += 1;
                break;
            }
            if i == 0 {
                return;
            }
            i -= 1;
        }
        for j in i..len {
            if j > i {
                s[j] = 0;
            }
            max[j] = if j == 0 { s[0] } else { max[j - 1].max(s[j]) };
        }
    }
}

fn count_rgs(len: usize, q: u8) -> u64 {
    // Stirling numbers of the second kind, summed over at most q blocks
    let q = q as usize;
    let mut row = vec![0u64; q + 1];
    row[0] = 1;
    for _ in 0..len {
        let mut next = vec![0u64; q + 1];
        for k in 1..=q {
            next[k] = (k as u64).saturating_mul(row[k]).saturating_add(row[k - 1]);
        }
        row = next;
    }
    row.iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// One engine call over precomputed hyperedges.
fn solve_fixed(m: usize, q: u8, copies: &[Vec<u32>], fixed: Vec<Option<u8>>, opts: SolveOptions) -> (Outcome, SearchStats) {
    let p = Problem::new(m, q, copies.to_vec(), fixed);
    engine::solve(&p, opts.budget, opts.workers)
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
