//! Subgraph embeddings and copy enumeration.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::{EdgeId, Graph, Vertex};

/// Injective map from a pattern graph into a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// Host vertex of each pattern vertex.
    pub vertices: Vec<Vertex>,
    /// Host edge of each pattern edge, indexed by pattern edge id.
    pub edges: Vec<EdgeId>,
}

impl Embedding {
    /// Host edge ids, sorted.
    pub fn edge_set(&self) -> Vec<EdgeId> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Pattern vertices in an order where each vertex after the first of its
/// component has an earlier neighbor, preferring high degree.
fn search_order(pattern: &Graph) -> Vec<Vertex> {
    let n = pattern.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = pattern
            .vertices()
            .filter(|&v| !placed[v as usize])
            .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[start as usize] = true;
        order.push(start);
        loop {
            // most already-placed neighbors first, then degree
            let next = pattern
                .vertices()
                .filter(|&v| !placed[v as usize])
                .filter(|&v| pattern.neighbors(v).iter().any(|&w| placed[w as usize]))
                .max_by_key(|&v| {
                    let back = pattern.neighbors(v).iter().filter(|&&w| placed[w as usize]).count();
                    (back, pattern.degree(v), std::cmp::Reverse(v))
                });
            match next {
                Some(v) => {
                    placed[v as usize] = true;
                    order.push(v);
                }
                None => break,
            }
        }
    }
    order
}

struct Search<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    induced: bool,
    order: Vec<Vertex>,
    map: Vec<Vertex>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(host: &'a Graph, pattern: &'a Graph, induced: bool) -> Self {
        Self::with_order(host, pattern, induced, search_order(pattern))
    }

    fn with_order(host: &'a Graph, pattern: &'a Graph, induced: bool, order: Vec<Vertex>) -> Self {
        Search {
            host,
            pattern,
            induced,
            order,
            map: vec![Vertex::MAX; pattern.n()],
            used: vec![false; host.n()],
        }
    }

    fn fits(&self, p: Vertex, h: Vertex) -> bool {
        if self.used[h as usize] || self.host.degree(h) < self.pattern.degree(p) {
            return false;
        }
        for &w in self.pattern.neighbors(p) {
            let hw = self.map[w as usize];
            if hw != Vertex::MAX && !self.host.has_edge(h, hw) {
                return false;
            }
        }
        if self.induced {
            for (w, &hw) in self.map.iter().enumerate() {
                if hw != Vertex::MAX
                    && w as Vertex != p
                    && !self.pattern.has_edge(p, w as Vertex)
                    && self.host.has_edge(h, hw)
                {
                    return false;
                }
            }
        }
        true
    }

    fn assign(&mut self, p: Vertex, h: Vertex) {
        self.map[p as usize] = h;
        self.used[h as usize] = true;
    }

    fn unassign(&mut self, p: Vertex) {
        let h = self.map[p as usize];
        self.used[h as usize] = false;
        self.map[p as usize] = Vertex::MAX;
    }

    fn embedding(&self) -> Embedding {
        let edges = self
            .pattern
            .edges()
            .iter()
            .map(|&(a, b)| {
                self.host
                    .edge_id(self.map[a as usize], self.map[b as usize])
                    .expect("embedding maps edges to edges")
            })
            .collect();
        Embedding { vertices: self.map.clone(), edges }
    }

    fn run<F: FnMut(Embedding) -> ControlFlow<()>>(&mut self, depth: usize, visit: &mut F) -> ControlFlow<()> {
        if depth == self.order.len() {
            return visit(self.embedding());
        }
        let p = self.order[depth];
        if self.map[p as usize] != Vertex::MAX {
            return self.run(depth + 1, visit);
        }
        let anchor = self
            .pattern
            .neighbors(p)
            .iter()
            .map(|&w| self.map[w as usize])
            .filter(|&h| h != Vertex::MAX)
            .min_by_key(|&h| self.host.degree(h));
        let candidates: Vec<Vertex> = match anchor {
            Some(h) => self.host.neighbors(h).to_vec(),
            None => self.host.vertices().collect(),
        };
        for h in candidates {
            if self.fits(p, h) {
                self.assign(p, h);
                let flow = self.run(depth + 1, visit);
                self.unassign(p);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every embedding of `pattern` into `host`, stopping when `visit` breaks.
pub fn for_each_embedding<F>(host: &Graph, pattern: &Graph, induced: bool, mut visit: F)
where
    F: FnMut(Embedding) -> ControlFlow<()>,
{
    if pattern.n() > host.n() {
        return;
    }
    let mut s = Search::new(host, pattern, induced);
    let _ = s.run(0, &mut visit);
}

/// Every injective (optionally induced) embedding of `pattern` into `host`.
pub fn enumerate_embeddings(host: &Graph, pattern: &Graph, induced: bool) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_embedding(host, pattern, induced, |e| {
        out.push(e);
        ControlFlow::Continue(())
    });
    out
}

/// Distinct copies of `pattern` in `host`, one embedding per edge set, ordered
/// by sorted edge set. Isolated pattern vertices are ignored.
pub fn enumerate_copies(host: &Graph, pattern: &Graph) -> Vec<Embedding> {
    let (core, _) = pattern.drop_isolated();
    if pattern.n() > host.n() {
        return Vec::new();
    }
    let mut seen = std::collections::BTreeMap::new();
    for_each_embedding(host, &core, false, |e| {
        seen.entry(e.edge_set()).or_insert(e);
        ControlFlow::Continue(())
    });
    seen.into_values().collect()
}

/// Edge sets of the distinct copies of `pattern` in `host`, sorted.
pub fn copy_edge_sets(host: &Graph, pattern: &Graph) -> Vec<Vec<EdgeId>> {
    let (core, _) = pattern.drop_isolated();
    if pattern.n() > host.n() {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    for_each_embedding(host, &core, false, |e| {
        seen.insert(e.edge_set());
        ControlFlow::Continue(())
    });
    seen.into_iter().collect()
}

/// Depth-first order of the pattern starting at `b`, visiting `a` last among
/// `b`'s component so the search walks away from `a` before closing back.
fn order_from(pattern: &Graph, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let n = pattern.n();
    let mut seen = vec![false; n];
    let mut order = vec![a, b];
    seen[a as usize] = true;
    seen[b as usize] = true;
    let mut stack = vec![b];
    while let Some(&v) = stack.last() {
        match pattern.neighbors(v).iter().find(|&&w| !seen[w as usize]) {
            Some(&w) => {
                seen[w as usize] = true;
                order.push(w);
                stack.push(w);
            }
            None => {
                stack.pop();
                if stack.is_empty() {
                    if let Some(w) = pattern.neighbors(a).iter().find(|&&w| !seen[w as usize]) {
                        seen[*w as usize] = true;
                        order.push(*w);
                        stack.push(*w);
                    }
                }
            }
        }
    }
    order.extend(search_order(pattern).into_iter().filter(|&v| !seen[v as usize]));
    order
}

/// Visits every embedding of `pattern` that maps some pattern edge onto the
/// host edge `u-w`, with the endpoint on `w` explored first. Embeddings
/// whose copies use `u-w` through several pattern edges are visited once per
/// such pattern edge.
pub fn for_each_through_edge<F>(host: &Graph, pattern: &Graph, u: Vertex, w: Vertex, mut visit: F)
where
    F: FnMut(Embedding) -> ControlFlow<()>,
{
    if pattern.n() > host.n() {
        return;
    }
    for &(x, y) in pattern.edges() {
        for (a, b) in [(x, y), (y, x)] {
            let mut s = Search::with_order(host, pattern, false, order_from(pattern, a, b));
            if !s.fits(a, u) {
                continue;
            }
            s.assign(a, u);
            if s.fits(b, w) {
                s.assign(b, w);
                if s.run(2, &mut visit).is_break() {
                    return;
                }
            }
        }
    }
}

/// Edge sets of the distinct copies of `pattern` that use at least one of
/// `anchors`. Each search starts from an anchor, so the cost is local.
pub fn copies_containing_edges(host: &Graph, pattern: &Graph, anchors: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    let (core, _) = pattern.drop_isolated();
    let mut seen = BTreeSet::new();
    if core.m() == 0 || pattern.n() > host.n() {
        return Vec::new();
    }
    for &anchor in anchors {
        let (u, v) = host.endpoints(anchor);
        for_each_through_edge(host, &core, u, v, |e| {
            seen.insert(e.edge_set());
            ControlFlow::Continue(())
        });
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn triangle_counts() {
        assert_eq!(enumerate_copies(&families::complete(4), &families::complete(3)).len(), 4);
        assert_eq!(enumerate_copies(&families::cycle(5), &families::complete(3)).len(), 0);
        assert_eq!(enumerate_copies(&families::complete(4), &families::cycle(4)).len(), 3);
        assert_eq!(enumerate_embeddings(&families::complete(4), &families::complete(3), false).len(), 24);
    }

    #[test]
    fn induced_embeddings_respect_non_edges() {
        let k4 = families::complete(4);
        assert!(enumerate_embeddings(&k4, &families::path(3), true).is_empty());
        assert_eq!(enumerate_embeddings(&families::cycle(5), &families::path(3), true).len(), 10);
    }

    #[test]
    fn anchored_copies() {
        let k5 = families::complete(5);
        let e = k5.edge_id(0, 1).unwrap();
        let got = copies_containing_edges(&k5, &families::complete(3), &[e]);
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|c| c.contains(&e)));
    }
}
