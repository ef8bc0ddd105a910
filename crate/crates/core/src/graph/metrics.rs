use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EdgeId, Graph, Vertex};

/// Path length in edges, with an explicit sentinel for "no path".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    /// True when at least `d` (infinity exceeds everything).
    pub fn at_least(self, d: usize) -> bool {
        self >= Distance::Finite(d)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Length of a shortest path with one end in `a` and the other in `b`.
pub fn distance(g: &Graph, a: &[Vertex], b: &[Vertex]) -> Distance {
    let mut target = vec![false; g.n()];
    for &v in b {
        target[v as usize] = true;
    }
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &v in a {
        if dist[v as usize] == usize::MAX {
            dist[v as usize] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if target[v as usize] {
            return Distance::Finite(dist[v as usize]);
        }
        for &w in g.neighbors(v) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    Distance::Infinite
}

/// Distance between the vertex sets spanned by two edge sets.
pub fn edge_distance(g: &Graph, a: &[EdgeId], b: &[EdgeId]) -> Distance {
    distance(g, &g.edge_vertices(a), &g.edge_vertices(b))
}

/// Length of a shortest cycle, or infinity for forests.
pub fn girth(g: &Graph) -> Distance {
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; g.n()];
    let mut parent = vec![Vertex::MAX; g.n()];
    for s in g.vertices() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s as usize] = 0;
        parent[s as usize] = Vertex::MAX;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if 2 * dist[v as usize] + 1 >= best {
                break;
            }
            for &w in g.neighbors(v) {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    parent[w as usize] = v;
                    queue.push_back(w);
                } else if parent[v as usize] != w {
                    best = best.min(dist[v as usize] + dist[w as usize] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Distance::Infinite
    } else {
        Distance::Finite(best)
    }
}

fn connected_without(g: &Graph, removed: &[bool]) -> bool {
    let Some(start) = g.vertices().find(|&v| !removed[v as usize]) else {
        return true;
    };
    let mut seen = removed.to_vec();
    seen[start as usize] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == removed.iter().filter(|r| !**r).count()
}

pub fn is_connected(g: &Graph) -> bool {
    connected_without(g, &vec![false; g.n()])
}

/// More than `k` vertices, and connected after removing any `k - 1` or fewer.
/// Checks every removal set, so only meant for small graphs.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    assert!(k >= 1, "k must be positive");
    if g.n() <= k {
        return false;
    }
    let n = g.n();
    let mut removed = vec![false; n];
    fn rec(g: &Graph, removed: &mut [bool], from: usize, left: usize) -> bool {
        if !connected_without(g, removed) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for v in from..removed.len() {
            removed[v] = true;
            let ok = rec(g, removed, v + 1, left - 1);
            removed[v] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    rec(g, &mut removed, 0, k - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub count_at_min: usize,
    pub histogram: BTreeMap<usize, usize>,
}

pub fn min_degree_stats(g: &Graph) -> DegreeStats {
    let mut histogram = BTreeMap::new();
    for v in g.vertices() {
        *histogram.entry(g.degree(v)).or_insert(0) += 1;
    }
    let min = histogram.keys().next().copied().unwrap_or(0);
    let max = histogram.keys().next_back().copied().unwrap_or(0);
    DegreeStats { min, max, count_at_min: histogram.get(&min).copied().unwrap_or(0), histogram }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn distances() {
        let p = families::path(6);
        assert_eq!(distance(&p, &[0], &[5]), Distance::Finite(5));
        assert_eq!(distance(&p, &[2, 3], &[3]), Distance::Finite(0));
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(distance(&g, &[0], &[3]), Distance::Infinite);
        assert!(Distance::Infinite.at_least(1_000_000));
        assert_eq!(edge_distance(&p, &[EdgeId(0)], &[EdgeId(4)]), Distance::Finite(3));
    }

    #[test]
    fn girths() {
        assert_eq!(girth(&families::cycle(7)), Distance::Finite(7));
        assert_eq!(girth(&families::complete(4)), Distance::Finite(3));
        assert_eq!(girth(&families::complete_bipartite(3, 3)), Distance::Finite(4));
        assert_eq!(girth(&families::star(4)), Distance::Infinite);
    }

    #[test]
    fn connectivity() {
        assert!(is_k_connected(&families::complete(4), 3));
        assert!(!is_k_connected(&families::complete(4), 4));
        assert!(!is_k_connected(&families::cycle(5), 3));
        assert!(is_k_connected(&families::cycle(5), 2));
        assert!(!is_k_connected(&families::star(3), 2));
        assert!(is_k_connected(&families::k3_join_c5(), 3));
    }

    #[test]
    fn stats() {
        let s = min_degree_stats(&families::star(5));
        assert_eq!((s.min, s.max, s.count_at_min), (1, 5, 5));
        assert_eq!(s.histogram, BTreeMap::from([(1, 5), (5, 1)]));
    }
}
