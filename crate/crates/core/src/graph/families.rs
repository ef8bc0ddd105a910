//! Named graph families used as targets and building blocks.

use super::{Graph, Vertex};

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n as Vertex {
        for i in 0..j {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges).expect("complete graph is simple")
}

/// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let mut edges: Vec<(Vertex, Vertex)> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n as Vertex - 1));
    Graph::from_edges(n, &edges).expect("cycle is simple")
}

/// Path on `n` vertices (`n - 1` edges).
pub fn path(n: usize) -> Graph {
    let edges: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path is simple")
}

/// Star `K_{1,m}` with center 0.
pub fn star(m: usize) -> Graph {
    let edges: Vec<(Vertex, Vertex)> = (1..=m as Vertex).map(|i| (0, i)).collect();
    Graph::from_edges(m + 1, &edges).expect("star is simple")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..a as Vertex {
        for j in 0..b as Vertex {
            edges.push((i, a as Vertex + j));
        }
    }
    Graph::from_edges(a + b, &edges).expect("complete bipartite graph is simple")
}

/// `K_t` plus one pendant edge from vertex 0 to the extra vertex `t`.
pub fn clique_with_pendant(t: usize) -> Graph {
    let k = complete(t);
    let mut edges = k.edges().to_vec();
    edges.push((0, t as Vertex));
    Graph::from_edges(t + 1, &edges).expect("simple")
}

/// Join of `K_3` and `C_5` (vertices 0..3 form the triangle, 3..8 the pentagon).
pub fn k3_join_c5() -> Graph {
    let mut edges = vec![(0, 1), (0, 2), (1, 2)];
    for i in 0..5u32 {
        edges.push((3 + i, 3 + (i + 1) % 5));
    }
    for a in 0..3 {
        for b in 3..8 {
            edges.push((a, b));
        }
    }
    Graph::from_edges(8, &edges).expect("simple")
}

/// Perfect matching with `k` edges `(2i, 2i+1)`.
pub fn matching(k: usize) -> Graph {
    let edges: Vec<(Vertex, Vertex)> = (0..k as Vertex).map(|i| (2 * i, 2 * i + 1)).collect();
    Graph::from_edges(2 * k, &edges).expect("simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(complete(6).m(), 15);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(path(4).m(), 3);
        assert_eq!(star(5).max_degree(), 5);
        assert_eq!(complete_bipartite(2, 3).m(), 6);
        assert_eq!(clique_with_pendant(4).m(), 7);
        assert_eq!(k3_join_c5().m(), 23);
        assert_eq!(matching(3).n(), 6);
    }
}
