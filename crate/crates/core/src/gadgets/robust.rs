use std::collections::VecDeque;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{Coverage, Evidence, PropertyResult, PropertyStatus, VerificationReport};
use crate::graph::{copies_containing_edges, for_each_through_edge, is_connected, Graph, Vertex};
use crate::GraphBuilder;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustOptions {
    pub trials: usize,
    /// Largest number of new vertices added in one trial.
    pub s_max: usize,
    pub seed: u64,
    /// Range of the per-trial probability of adding each candidate edge.
    pub density: (f64, f64),
}

impl Default for RobustOptions {
    fn default() -> Self {
        RobustOptions { trials: 10_000, s_max: 3, seed: 0, density: (0.05, 0.6) }
    }
}

/// A copy of H that lies neither in the outer graph nor in the graph
/// induced by the new vertices and the inner vertices. New vertices are
/// numbered from `outer.n()` upwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustViolation {
    pub trial: usize,
    pub new_vertices: usize,
    pub new_edges: Vec<(Vertex, Vertex)>,
    /// Vertices of the offending copy, in outer numbering.
    pub copy: Vec<Vertex>,
}

/// Independent re-check of a violation: rebuilds the augmented graph and
/// confirms the copy exists there, uses a vertex outside the inner set and
/// the new vertices, and uses a new edge.
pub fn recheck_violation(outer: &Graph, inner: &[Vertex], h: &Graph, v: &RobustViolation) -> bool {
    let mut b = GraphBuilder::from_graph(outer);
    b.add_vertices(v.new_vertices);
    for &(x, y) in &v.new_edges {
        if outer.has_edge(x, y) || b.add_edge(x, y).is_err() {
            return false;
        }
    }
    let aug = b.build();
    let (core, _) = h.drop_isolated();
    let in_u = |x: Vertex| inner.contains(&x) || x as usize >= outer.n();
    let uses_outside = v.copy.iter().any(|&x| !in_u(x));
    let (copy_graph, order) = aug.induced_subgraph(&v.copy);
    let new_set: std::collections::HashSet<(Vertex, Vertex)> =
        v.new_edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    // some embedding of H on exactly these vertices that uses a new edge
    let mut found = false;
    crate::graph::enumerate_embeddings(&copy_graph, &core, false).iter().for_each(|e| {
        let uses_new = core.edges().iter().any(|&(a, b)| {
            let (x, y) = (order[e.vertices[a as usize] as usize], order[e.vertices[b as usize] as usize]);
            new_set.contains(&(x.min(y), x.max(y)))
        });
        found |= uses_new;
    });
    uses_outside && found && core.n() == v.copy.len()
}

/// Vertices within `radius` of `from`.
fn ball(g: &Graph, from: &[Vertex], radius: usize) -> Vec<Vertex> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    for &v in from {
        dist[v as usize] = 0;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        if dist[v as usize] == radius {
            continue;
        }
        for &w in g.neighbors(v) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    g.vertices().filter(|&v| dist[v as usize] != usize::MAX).collect()
}

/// Randomized search for a violation of robustness of `outer` relative to
/// the subgraph induced by `inner`: add up to `s_max` new vertices and
/// random edges inside them plus `inner`, and look for an H-copy that
/// straddles the boundary. A reported violation is certain; passing means
/// no violation was found in the given number of seeded trials.
pub fn check_robust(outer: &Graph, inner: &[Vertex], h: &Graph, opts: &RobustOptions) -> VerificationReport {
    let mut report = VerificationReport::new(
        "robust",
        serde_json::json!({
            "n": outer.n(),
            "m": outer.m(),
            "inner": inner.len(),
            "trials": opts.trials,
            "s_max": opts.s_max,
            "seed": opts.seed,
        }),
    );
    let (core, _) = h.drop_isolated();
    if core.m() == 0 {
        report.push(PropertyResult::new("robust", PropertyStatus::Pass, "target has no edges"));
        return report;
    }
    // Only vertices near the inner set can take part in a straddling copy.
    let near = ball(outer, inner, core.n());
    let (local, back) = outer.induced_subgraph(&near);
    let mut is_inner = vec![false; local.n()];
    for (i, &v) in back.iter().enumerate() {
        is_inner[i] = inner.contains(&v);
    }
    let inner_local: Vec<Vertex> = (0..local.n() as Vertex).filter(|&v| is_inner[v as usize]).collect();
    let boundary: Vec<(Vertex, Vertex)> = local
        .edges()
        .iter()
        .filter_map(|&(a, b)| match (is_inner[a as usize], is_inner[b as usize]) {
            (true, false) => Some((a, b)),
            (false, true) => Some((b, a)),
            _ => None,
        })
        .collect();
    let connected = is_connected(&core);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let to_outer = |v: Vertex| -> Vertex {
        if (v as usize) < local.n() {
            back[v as usize]
        } else {
            (outer.n() + v as usize - local.n()) as Vertex
        }
    };
    for trial in 0..opts.trials {
        let s = rng.gen_range(0..=opts.s_max);
        let p = rng.gen_range(opts.density.0..=opts.density.1);
        let mut b = GraphBuilder::from_graph(&local);
        let new_vs = b.add_vertices(s);
        let u: Vec<Vertex> = inner_local.iter().copied().chain(new_vs).collect();
        let mut added = Vec::new();
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                if !b.has_edge(u[i], u[j]) && rng.gen_bool(p) {
                    added.push(b.add_edge(u[i], u[j]).expect("fresh pair"));
                }
            }
        }
        if added.is_empty() {
            continue;
        }
        let aug = b.build();
        let first_new = local.m() as u32;
        let in_u = |v: Vertex| (v as usize) >= local.n() || is_inner[v as usize];
        let mut hit: Option<Vec<Vertex>> = None;
        if connected {
            for &(x, w) in &boundary {
                for_each_through_edge(&aug, &core, x, w, |e| {
                    if e.edges.iter().any(|id| id.0 >= first_new) {
                        hit = Some(e.vertices.clone());
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                });
                if hit.is_some() {
                    break;
                }
            }
        } else {
            for c in copies_containing_edges(&aug, &core, &added) {
                let vs = aug.edge_vertices(&c);
                if vs.iter().any(|&v| !in_u(v)) {
                    hit = Some(vs);
                    break;
                }
            }
        }
        if let Some(copy) = hit {
            let new_edges = added
                .iter()
                .map(|&e| {
                    let (a, b) = aug.endpoints(e);
                    (to_outer(a), to_outer(b))
                })
                .collect();
            let v = RobustViolation { trial, new_vertices: s, new_edges, copy: copy.into_iter().map(to_outer).collect() };
            report.push(
                PropertyResult::new("robust", PropertyStatus::Fail, format!("straddling copy found in trial {trial}"))
                    .counterexample(Evidence::Robustness(v))
                    .coverage(Coverage { checked: trial as u64 + 1, total: opts.trials as u64, sampled: true }),
            );
            return report;
        }
    }
    report.push(
        PropertyResult::new("robust", PropertyStatus::Pass, format!("no violation in {} seeded trials", opts.trials))
            .coverage(Coverage { checked: opts.trials as u64, total: opts.trials as u64, sampled: true }),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn missing_edge_of_k4_is_not_robust() {
        let k4 = families::complete(4);
        let outer = k4.without_edges(&[k4.edge_id(0, 1).unwrap()]);
        let r = check_robust(&outer, &[0, 1], &families::complete(3), &RobustOptions { trials: 200, ..Default::default() });
        let p = r.get("robust").unwrap();
        assert_eq!(p.status, PropertyStatus::Fail);
        let Some(Evidence::Robustness(v)) = &p.counterexample else { panic!("no counterexample") };
        assert!(recheck_violation(&outer, &[0, 1], &families::complete(3), v));
    }

    #[test]
    fn far_apart_pieces_are_robust() {
        // a triangle hanging off a long path: nothing near the path end closes a triangle
        let mut b = GraphBuilder::from_graph(&families::path(8));
        b.add_edge(5, 7).unwrap();
        let outer = b.build();
        let r = check_robust(&outer, &[0, 1], &families::complete(3), &RobustOptions { trials: 500, ..Default::default() });
        assert_eq!(r.status_of("robust"), Some(PropertyStatus::Pass));
    }
}
