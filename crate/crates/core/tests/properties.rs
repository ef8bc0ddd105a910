use std::collections::BTreeSet;

use proptest::prelude::*;
use ramsey_core::arrowing::{check_arrows, is_minimal, MinimalityVerdict, SolveOptions, Verdict};
use ramsey_core::constructions::{cycle_block, ktk2_block, star_arrow_predicate};
use ramsey_core::graph::format::{parse_corpus, parse_graph6, parse_sparse6, write_graph6, write_sparse6};
use ramsey_core::graph::{copy_edge_sets, families, is_connected, patterns_isomorphic, EdgeColoring};
use ramsey_core::{Graph, Vertex};

const G6: &str = include_str!("../data/connected_le6.g6");
const S6: &str = include_str!("../data/connected_le6.s6");
const MIXED_G6: &str = include_str!("../data/random_mixed.g6");
const MIXED_S6: &str = include_str!("../data/random_mixed.s6");

fn graph_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n as Vertex).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len().min(max_m))
            .prop_map(move |edges| Graph::from_edges(n, &edges).unwrap())
    })
}

/// Edge sets of all copies of `h` in `g`, by trying every injective vertex map.
fn naive_copies(g: &Graph, h: &Graph) -> BTreeSet<Vec<u32>> {
    fn go(g: &Graph, h: &Graph, map: &mut Vec<Vertex>, out: &mut BTreeSet<Vec<u32>>) {
        if map.len() == h.n() {
            let mut ids: Vec<u32> = h
                .edges()
                .iter()
                .map(|&(a, b)| match g.edge_id(map[a as usize], map[b as usize]) {
                    Some(e) => e.0,
                    None => u32::MAX,
                })
                .collect();
            if ids.contains(&u32::MAX) {
                return;
            }
            ids.sort_unstable();
            out.insert(ids);
            return;
        }
        let i = map.len() as Vertex;
        for v in g.vertices() {
            // only extend maps whose image so far is a valid partial copy
            let fits = h.neighbors(i).iter().filter(|&&a| a < i).all(|&a| g.has_edge(map[a as usize], v));
            if fits && !map.contains(&v) {
                map.push(v);
                go(g, h, map, out);
                map.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(g, h, &mut Vec::new(), &mut out);
    out
}

/// Every `q^m` coloring, looking for one with no monochromatic copy.
fn naive_arrows(g: &Graph, h: &Graph, q: u8) -> bool {
    let copies: Vec<Vec<u32>> = naive_copies(g, h).into_iter().collect();
    let m = g.m();
    let total = (q as u64).pow(m as u32);
    let mut colors = vec![0u8; m];
    for code in 0..total {
        let mut c = code;
        for slot in colors.iter_mut() {
            *slot = (c % q as u64) as u8;
            c /= q as u64;
        }
        let mono = copies.iter().any(|cp| cp.iter().all(|&e| colors[e as usize] == colors[cp[0] as usize]));
        if !mono {
            return false;
        }
    }
    true
}

fn is_bipartite(h: &Graph) -> bool {
    let mut side = vec![u8::MAX; h.n()];
    for s in h.vertices() {
        if side[s as usize] != u8::MAX {
            continue;
        }
        side[s as usize] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in h.neighbors(v) {
                if side[w as usize] == u8::MAX {
                    side[w as usize] = 1 - side[v as usize];
                    stack.push(w);
                } else if side[w as usize] == side[v as usize] {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether the graph on `edges` has a cycle of length exactly `len`, by
/// extending simple paths from each start vertex.
fn has_cycle_of_length(n: usize, edges: &[(Vertex, Vertex)], len: usize) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    fn walk(adj: &[Vec<usize>], start: usize, path: &mut Vec<usize>, len: usize) -> bool {
        let last = *path.last().unwrap();
        if path.len() == len {
            return adj[last].contains(&start);
        }
        for &w in &adj[last] {
            if w > start && !path.contains(&w) {
                path.push(w);
                if walk(adj, start, path, len) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    (0..n).any(|s| walk(&adj, s, &mut vec![s], len))
}

fn small_targets() -> Vec<Graph> {
    vec![families::path(3), families::complete(3), families::path(4), families::star(3), families::cycle(4)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn copies_agree_with_injective_maps(g in graph_strategy(6, 12), which in 0usize..5) {
        let h = &small_targets()[which];
        let fast: BTreeSet<Vec<u32>> = copy_edge_sets(&g, h)
            .into_iter()
            .map(|c| { let mut v: Vec<u32> = c.iter().map(|e| e.0).collect(); v.sort_unstable(); v })
            .collect();
        prop_assert_eq!(fast, naive_copies(&g, h));
    }

    #[test]
    fn engine_agrees_with_enumeration(g in graph_strategy(6, 14), which in 0usize..3) {
        let h = &small_targets()[which];
        prop_assume!(g.m() > 0);
        let r = check_arrows(&g, h, 2, SolveOptions::default()).unwrap();
        prop_assert_eq!(r.verdict == Verdict::Arrows, naive_arrows(&g, h, 2));
    }

    #[test]
    fn engine_agrees_with_enumeration_three_colors(g in graph_strategy(5, 9)) {
        prop_assume!(g.m() > 0);
        let h = families::path(3);
        let r = check_arrows(&g, &h, 3, SolveOptions::default()).unwrap();
        prop_assert_eq!(r.verdict == Verdict::Arrows, naive_arrows(&g, &h, 3));
    }

    #[test]
    fn adding_an_edge_keeps_arrowing(g in graph_strategy(7, 16), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.m() > 0);
        let h = families::complete(3);
        let missing: Vec<(Vertex, Vertex)> = g.vertices()
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .filter(|&(i, j)| !g.has_edge(i, j))
            .collect();
        prop_assume!(!missing.is_empty());
        let mut edges = g.edges().to_vec();
        edges.push(missing[pick.index(missing.len())]);
        let bigger = Graph::from_edges(g.n(), &edges).unwrap();
        let small = check_arrows(&g, &h, 2, SolveOptions::default()).unwrap().verdict;
        let big = check_arrows(&bigger, &h, 2, SolveOptions::default()).unwrap().verdict;
        prop_assert!(small != Verdict::Arrows || big == Verdict::Arrows);
    }

    #[test]
    fn pattern_isomorphism_is_an_equivalence(
        g in graph_strategy(5, 8),
        seeds in proptest::collection::vec(any::<u64>(), 3),
    ) {
        prop_assume!(g.m() > 0);
        let color = |s: u64| {
            let colors = (0..g.m()).map(|i| ((s >> (i % 32)) as u8 ^ i as u8) % 2).collect();
            EdgeColoring::total(2, colors).unwrap().pattern().unwrap()
        };
        let (a, b, c) = (color(seeds[0]), color(seeds[1]), color(seeds[2]));
        prop_assert!(patterns_isomorphic(&g, &a, &g, &a));
        prop_assert_eq!(patterns_isomorphic(&g, &a, &g, &b), patterns_isomorphic(&g, &b, &g, &a));
        if patterns_isomorphic(&g, &a, &g, &b) && patterns_isomorphic(&g, &b, &g, &c) {
            prop_assert!(patterns_isomorphic(&g, &a, &g, &c));
        }
    }

    #[test]
    fn star_predicate_matches_engine(g in graph_strategy(7, 12), m in 1usize..=3) {
        prop_assume!(g.m() > 0 && is_connected(&g));
        let r = check_arrows(&g, &families::star(m), 2, SolveOptions::default()).unwrap();
        prop_assert_eq!(star_arrow_predicate(&g, m).unwrap(), r.verdict == Verdict::Arrows);
    }

    #[test]
    fn graph6_round_trips(g in graph_strategy(12, 40)) {
        let text = write_graph6(&g).unwrap();
        let back = parse_graph6(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        let set = |x: &Graph| x.edges().iter().copied().collect::<BTreeSet<_>>();
        prop_assert_eq!(set(&back), set(&g));
        let s6 = write_sparse6(&g).unwrap();
        prop_assert_eq!(set(&parse_sparse6(&s6).unwrap()), set(&g));
    }
}

#[test]
fn corpus_tokens_are_byte_exact() {
    for text in [G6, MIXED_G6] {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        for (g, line) in parse_corpus(text).unwrap().iter().zip(&lines) {
            assert_eq!(write_graph6(g).unwrap(), line.trim());
        }
    }
    for text in [S6, MIXED_S6] {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        for (g, line) in parse_corpus(text).unwrap().iter().zip(&lines) {
            assert_eq!(write_sparse6(g).unwrap(), line.trim());
        }
    }
}

#[test]
fn graph6_and_sparse6_corpora_agree() {
    let a = parse_corpus(G6).unwrap();
    let b = parse_corpus(S6).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        let set = |g: &Graph| g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect::<BTreeSet<_>>();
        assert_eq!(set(x), set(y));
    }
}

#[test]
fn base_patterns_have_no_monochromatic_target() {
    for q in 2..=3u8 {
        for t in 4..=6 {
            let b = cycle_block(q, t).unwrap();
            for colors in b.forcing.iter().chain([&b.relaxed]) {
                for c in 0..q {
                    let class: Vec<(Vertex, Vertex)> = b
                        .graph
                        .edges()
                        .iter()
                        .zip(colors)
                        .filter(|(_, &x)| x == c)
                        .map(|(&e, _)| e)
                        .collect();
                    assert!(!has_cycle_of_length(b.graph.n(), &class, t), "q={q} t={t} color {c}");
                }
            }
        }
    }
    for t in 3..=6 {
        let b = ktk2_block(t).unwrap();
        let kt = families::complete(t);
        let copies = naive_copies(&b.graph, &kt);
        for cp in &copies {
            let first = b.relaxed[cp[0] as usize];
            assert!(cp.iter().any(|&e| b.relaxed[e as usize] != first), "relaxed K_{t} copy is monochromatic");
        }
        // the all-zero coloring has K_t but each copy is a whole component, so no pendant edge
        let kt2 = families::clique_with_pendant(t);
        assert!(naive_copies(&b.graph, &kt2).is_empty());
    }
}

#[test]
fn minimal_graphs_respect_degree_bound_for_bipartite_targets() {
    // every minimal graph among the small corpus graphs, for small bipartite targets
    let corpus = parse_corpus(G6).unwrap();
    for h in [families::path(3), families::cycle(4), families::path(4)] {
        assert!(is_bipartite(&h));
        let bound = 2 * (h.min_degree() - 1) + 1;
        for g in corpus.iter().filter(|g| g.m() > 0) {
            let r = is_minimal(g, &h, 2, SolveOptions::default()).unwrap();
            if r.verdict == MinimalityVerdict::Minimal {
                assert!(r.graph.min_degree() >= bound);
            }
        }
    }
}
