use std::ops::ControlFlow;

use super::embed::for_each_embedding;
use super::Graph;

fn degree_sequence(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// Exact isomorphism test by backtracking; intended for small graphs.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() || degree_sequence(a) != degree_sequence(b) {
        return false;
    }
    // An induced embedding between graphs of equal order is an isomorphism.
    let mut found = false;
    for_each_embedding(b, a, true, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn basic() {
        let c = families::cycle(6);
        let relabeled = Graph::from_edges(6, &[(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)]).unwrap();
        assert!(are_isomorphic(&c, &relabeled));
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!are_isomorphic(&c, &two_triangles));
    }
}
