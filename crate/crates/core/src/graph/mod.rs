//! Simple undirected graphs with stable edge ids, plus the machinery the rest
//! of the crate builds on: copy enumeration, color patterns, distances and the
//! graph6/sparse6 text formats.

mod builder;
mod embed;
pub mod families;
pub mod format;
mod iso;
mod metrics;
pub mod pattern;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builder::{compose, GraphBuilder};
pub use embed::{
    copies_containing_edges, copy_edge_sets, enumerate_copies, enumerate_embeddings, for_each_through_edge,
    Embedding,
};
pub use iso::are_isomorphic;
pub use metrics::{distance, edge_distance, girth, is_connected, is_k_connected, min_degree_stats, DegreeStats, Distance};
pub use pattern::{patterns_isomorphic, ColorPattern, EdgeColoring, FamilyMode, PatternFamily};

/// Vertex index into a [`Graph`].
pub type Vertex = u32;

/// Stable identifier of an edge. Ids are dense, `0..m`, in insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("identification maps gadget vertices {0} and {1} onto the same host vertex {2}")]
    CollapsedIdentification(Vertex, Vertex, Vertex),
    #[error("interface edge {0}-{1} of the gadget maps onto host non-edge {2}-{3}")]
    InterfaceNonEdge(Vertex, Vertex, Vertex, Vertex),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("length mismatch: expected {expected} data bytes, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("byte {0:#04x} out of the printable range 63..=126")]
    ByteOutOfRange(u8),
    #[error("graph too large for the format ({0} vertices)")]
    TooLarge(usize),
    #[error("multigraph or loop in sparse6 data at {0}-{1}")]
    NotSimple(Vertex, Vertex),
}

/// Immutable simple graph.
///
/// Adjacency is kept as sorted neighbor lists plus an edge index; gadget graphs
/// routinely reach tens of thousands of vertices, so a dense `n x n` bitset is
/// only materialized on demand by [`Graph::adjacency_bits`].
#[derive(Clone, Default)]
pub struct Graph {
    nbrs: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
    index: HashMap<(Vertex, Vertex), EdgeId>,
    labels: Vec<Option<String>>,
}

#[inline]
fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::with_vertices(n).build()
    }

    /// Builds a graph from an edge list; edge ids follow the list order.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::with_vertices(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub(crate) fn from_parts(
        nbrs: Vec<Vec<Vertex>>,
        edges: Vec<(Vertex, Vertex)>,
        index: HashMap<(Vertex, Vertex), EdgeId>,
        labels: Vec<Option<String>>,
    ) -> Self {
        Graph { nbrs, edges, index, labels }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.nbrs.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n() as Vertex
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.m() as u32).map(EdgeId)
    }

    /// Endpoints of `e` with the smaller vertex first.
    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e.index()]
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    #[inline]
    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.index.contains_key(&key(u, v))
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.nbrs[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.nbrs[v as usize].len()
    }

    pub fn min_degree(&self) -> usize {
        self.nbrs.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.nbrs.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.get(v as usize).and_then(|l| l.as_deref())
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<Vertex> {
        self.labels
            .iter()
            .position(|l| l.as_deref() == Some(label))
            .map(|i| i as Vertex)
    }

    /// Vertices touched by a set of edges, sorted and deduplicated.
    pub fn edge_vertices(&self, edges: &[EdgeId]) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = edges
            .iter()
            .flat_map(|&e| {
                let (a, b) = self.endpoints(e);
                [a, b]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Dense adjacency rows, one `Vec<u64>` bitset per vertex.
    pub fn adjacency_bits(&self) -> Vec<Vec<u64>> {
        let words = self.n().div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; self.n()];
        for &(u, v) in &self.edges {
            rows[u as usize][v as usize / 64] |= 1 << (v % 64);
            rows[v as usize][u as usize / 64] |= 1 << (u % 64);
        }
        rows
    }

    /// True when no edge of the graph joins two vertices of `vs` except those listed.
    pub fn is_induced_on(&self, vs: &[Vertex], edges: &[EdgeId]) -> bool {
        let mut inside = vec![false; self.n()];
        for &v in vs {
            inside[v as usize] = true;
        }
        let mut count = 0usize;
        for &(u, v) in &self.edges {
            if inside[u as usize] && inside[v as usize] {
                count += 1;
            }
        }
        let listed = edges
            .iter()
            .filter(|&&e| {
                let (a, b) = self.endpoints(e);
                inside[a as usize] && inside[b as usize]
            })
            .count();
        count == listed && listed == edges.len()
    }

    /// Same vertex set, only the listed edges (ids reassigned in ascending original order).
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> Graph {
        let mut ids: Vec<EdgeId> = keep.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut b = GraphBuilder::with_vertices(self.n());
        b.set_labels(self.labels.clone());
        for e in ids {
            let (u, v) = self.endpoints(e);
            b.add_edge(u, v).expect("subgraph of a simple graph is simple");
        }
        b.build()
    }

    /// Same vertex set with the listed edges deleted.
    pub fn without_edges(&self, remove: &[EdgeId]) -> Graph {
        let mut gone = vec![false; self.m()];
        for e in remove {
            gone[e.index()] = true;
        }
        let keep: Vec<EdgeId> = self.edge_ids().filter(|e| !gone[e.index()]).collect();
        self.edge_subgraph(&keep)
    }

    /// Subgraph induced by `vs`; returns it together with the old index of each new vertex.
    pub fn induced_subgraph(&self, vs: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut order: Vec<Vertex> = vs.to_vec();
        order.sort_unstable();
        order.dedup();
        let mut pos = vec![u32::MAX; self.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut b = GraphBuilder::with_vertices(order.len());
        b.set_labels(order.iter().map(|&v| self.labels[v as usize].clone()).collect());
        for &(u, v) in &self.edges {
            let (pu, pv) = (pos[u as usize], pos[v as usize]);
            if pu != u32::MAX && pv != u32::MAX {
                b.add_edge(pu, pv).expect("induced subgraph is simple");
            }
        }
        (b.build(), order)
    }

    pub fn without_vertices(&self, remove: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut gone = vec![false; self.n()];
        for &v in remove {
            gone[v as usize] = true;
        }
        let keep: Vec<Vertex> = self.vertices().filter(|v| !gone[*v as usize]).collect();
        self.induced_subgraph(&keep)
    }

    /// Drops isolated vertices; returns the old index of each remaining vertex.
    pub fn drop_isolated(&self) -> (Graph, Vec<Vertex>) {
        let keep: Vec<Vertex> = self.vertices().filter(|&v| self.degree(v) > 0).collect();
        self.induced_subgraph(&keep)
    }

    /// Graph on the endpoints of the given edges only.
    pub fn edge_induced(&self, edges: &[EdgeId]) -> Graph {
        let vs = self.edge_vertices(edges);
        let mut pos = vec![u32::MAX; self.n()];
        for (i, &v) in vs.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut ids = edges.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut b = GraphBuilder::with_vertices(vs.len());
        for e in ids {
            let (u, v) = self.endpoints(e);
            b.add_edge(pos[u as usize], pos[v as usize]).expect("simple");
        }
        b.build()
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut b = GraphBuilder::from_graph(self);
        b.attach(other, &[], "").expect("empty identification cannot fail");
        b.build()
    }

    pub fn degree_sum(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum()
    }
}

impl PartialEq for Graph {
    /// Equality of labeled structure: same vertex count and identical edge id sequence.
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = families::complete(5);
        assert_eq!(g.degree_sum(), 2 * g.m());
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(1, 0))
        );
        assert_eq!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange(2, 2))
        );
    }

    #[test]
    fn induced_and_edge_subgraphs() {
        let k4 = families::complete(4);
        let (tri, old) = k4.induced_subgraph(&[3, 1, 0]);
        assert_eq!(old, vec![0, 1, 3]);
        assert_eq!(tri.m(), 3);
        let sub = k4.without_edges(&[EdgeId(0)]);
        assert_eq!(sub.m(), 5);
        assert!(!sub.has_edge(0, 1));
        assert!(k4.is_induced_on(&[0, 1, 2], &[EdgeId(0), EdgeId(1), EdgeId(2)]));
        assert!(!k4.is_induced_on(&[0, 1, 2], &[EdgeId(0)]));
    }

    #[test]
    fn drop_isolated_keeps_order() {
        let g = Graph::from_edges(5, &[(1, 3)]).unwrap();
        let (h, old) = g.drop_isolated();
        assert_eq!(h.n(), 2);
        assert_eq!(old, vec![1, 3]);
    }
}
