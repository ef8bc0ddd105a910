use std::path::Path;

use serde::{Deserialize, Serialize};

use super::report::{Evidence, PropertyResult, PropertyStatus, VerificationReport};
use super::{check_common, solve_fixed, GadgetError, Polarity, Status, VerifyOptions};
use crate::arrowing::{Outcome, SearchStats};
use crate::graph::format::{parse_graph6, write_graph6};
use crate::graph::{are_isomorphic, copy_edge_sets, edge_distance, Distance, EdgeColoring, EdgeId, Graph, Vertex};
use crate::GraphBuilder;

/// A graph with two designated edges `e` and `f` whose colors are tied
/// together in every H-free coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenderSpec {
    pub graph: Graph,
    pub e: EdgeId,
    pub f: EdgeId,
    pub polarity: Polarity,
    pub target: Graph,
    pub q: u8,
    /// Claimed lower bound on the distance between `e` and `f`.
    pub d: usize,
    pub status: Status,
}

impl SenderSpec {
    pub fn distance(&self) -> Distance {
        edge_distance(&self.graph, &[self.e], &[self.f])
    }
}

/// `e` and `f` joined by a path, at distance exactly `d`. Carries no
/// coloring guarantee.
pub fn make_stub_sender(h: &Graph, q: u8, d: usize, polarity: Polarity) -> Result<SenderSpec, GadgetError> {
    check_common(h, q, d)?;
    let mut b = GraphBuilder::new();
    let e0 = b.add_vertex(Some("e.0".into()))?;
    let e1 = b.add_vertex(Some("e.1".into()))?;
    let e = b.add_edge(e0, e1)?;
    let mut last = e1;
    for _ in 1..d {
        let v = b.add_vertex(None)?;
        b.add_edge(last, v)?;
        last = v;
    }
    let f0 = b.add_vertex(Some("f.0".into()))?;
    let f1 = b.add_vertex(Some("f.1".into()))?;
    b.add_edge(last, f0)?;
    let f = b.add_edge(f0, f1)?;
    Ok(SenderSpec { graph: b.build(), e, f, polarity, target: h.clone(), q, d, status: Status::Stub })
}

/// Chains senders by identifying each `f` with the next `e`. All but the
/// last must be positive; the chain takes the last one's polarity.
pub fn string_senders(senders: &[SenderSpec]) -> Result<SenderSpec, GadgetError> {
    let first = senders.first().ok_or_else(|| GadgetError::Precondition("no senders to string".into()))?;
    for (i, s) in senders.iter().enumerate() {
        if s.q != first.q || !are_isomorphic(&s.target, &first.target) {
            return Err(GadgetError::Precondition(format!("sender {i} has a different target or q")));
        }
        if i + 1 < senders.len() && s.polarity != Polarity::Positive {
            return Err(GadgetError::Precondition(format!("sender {i} is negative but not last")));
        }
        let (a, b) = s.graph.endpoints(s.e);
        let (c, d) = s.graph.endpoints(s.f);
        if a == c || a == d || b == c || b == d {
            return Err(GadgetError::Interface(format!("sender {i} has e and f sharing a vertex")));
        }
    }
    let mut b = GraphBuilder::new();
    let map = b.attach(&super::unlabeled(&first.graph), &[], "")?;
    let e = first.e;
    let (f0, f1) = first.graph.endpoints(first.f);
    let mut cur = (map[f0 as usize], map[f1 as usize]);
    for s in &senders[1..] {
        let (e0, e1) = s.graph.endpoints(s.e);
        let map = b.attach(&super::unlabeled(&s.graph), &[(e0, cur.0), (e1, cur.1)], "")?;
        let (f0, f1) = s.graph.endpoints(s.f);
        cur = (map[f0 as usize], map[f1 as usize]);
    }
    let f = b.edge_id(cur.0, cur.1).expect("last f was attached");
    let status = if senders.iter().any(|s| s.status == Status::Stub) {
        Status::Stub
    } else if senders.iter().all(|s| s.status == Status::FullyVerified) {
        Status::FullyVerified
    } else {
        Status::Unverified
    };
    let last = senders.last().unwrap();
    Ok(SenderSpec {
        graph: b.build(),
        e,
        f,
        polarity: last.polarity,
        target: first.target.clone(),
        q: first.q,
        d: senders.iter().map(|s| s.d).sum(),
        status,
    })
}

fn params(s: &SenderSpec) -> serde_json::Value {
    serde_json::json!({
        "polarity": s.polarity,
        "q": s.q,
        "d": s.d,
        "n": s.graph.n(),
        "m": s.graph.m(),
        "e": s.e.0,
        "f": s.f.0,
        "status": s.status,
    })
}

/// Checks S1 (some H-free coloring exists), S2 (the tie between `e` and
/// `f`) and S3 (distance). Stub senders get S3 only.
pub fn verify_sender(s: &SenderSpec, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport::new("sender", params(s));
    let dist = s.distance();
    r.push(if dist.at_least(s.d) {
        PropertyResult::new("S3", PropertyStatus::Pass, format!("distance {dist} >= {}", s.d))
    } else {
        PropertyResult::new("S3", PropertyStatus::Fail, format!("distance {dist} < {}", s.d))
            .counterexample(Evidence::Distance { found: dist, required: s.d })
    });
    if s.status == Status::Stub {
        for name in ["S1", "S2"] {
            r.push(PropertyResult::new(name, PropertyStatus::StructuralOnly, "stub sender"));
        }
        return r;
    }
    let m = s.graph.m();
    let copies: Vec<Vec<u32>> =
        copy_edge_sets(&s.graph, &s.target).into_iter().map(|c| c.into_iter().map(|e| e.0).collect()).collect();
    let (o, st) = solve_fixed(m, s.q, &copies, vec![None; m], opts.solve);
    r.nodes += st.nodes;
    r.push(match o {
        Outcome::Found(c) => PropertyResult::new("S1", PropertyStatus::Pass, "H-free coloring found")
            .witness(Evidence::coloring(&EdgeColoring::total(s.q, c).unwrap())),
        Outcome::Exhausted => PropertyResult::new("S1", PropertyStatus::Fail, "graph arrows H")
            .counterexample(Evidence::Exhausted { nodes: st.nodes }),
        Outcome::Unknown => PropertyResult::new("S1", PropertyStatus::BudgetExhausted, "budget exhausted"),
    });
    // By color symmetry one representative pair of colors suffices.
    let mut fixed = vec![None; m];
    fixed[s.e.index()] = Some(0);
    fixed[s.f.index()] = Some(if s.polarity == Polarity::Positive { 1 } else { 0 });
    let (o, st) = solve_fixed(m, s.q, &copies, fixed, opts.solve);
    r.nodes += st.nodes;
    let want = if s.polarity == Polarity::Positive { "c(e) = c(f)" } else { "c(e) != c(f)" };
    r.push(match o {
        Outcome::Found(c) => PropertyResult::new("S2", PropertyStatus::Fail, format!("H-free coloring violates {want}"))
            .counterexample(Evidence::coloring(&EdgeColoring::total(s.q, c).unwrap())),
        Outcome::Exhausted => PropertyResult::new("S2", PropertyStatus::Pass, format!("every H-free coloring has {want}"))
            .witness(Evidence::Exhausted { nodes: st.nodes }),
        Outcome::Unknown => PropertyResult::new("S2", PropertyStatus::BudgetExhausted, "budget exhausted"),
    });
    r
}

/// Result of an exhaustive scan of a graph corpus for senders.
#[derive(Clone, Debug)]
pub struct SenderSearch {
    pub found: Option<SenderSpec>,
    pub graphs_checked: usize,
    pub pairs_checked: usize,
    /// False when some check ran out of budget, so "not found" is not conclusive.
    pub complete: bool,
    pub max_order: usize,
    pub stats: SearchStats,
}

/// Scans `corpus` graphs of order at most `max_order` for an edge pair that
/// forms a sender of the requested polarity at distance at least `d`.
pub fn search_sender(
    h: &Graph,
    q: u8,
    d: usize,
    polarity: Polarity,
    max_order: usize,
    corpus: &[Graph],
    opts: &VerifyOptions,
) -> Result<SenderSearch, GadgetError> {
    check_common(h, q, d)?;
    let mut out = SenderSearch {
        found: None,
        graphs_checked: 0,
        pairs_checked: 0,
        complete: true,
        max_order,
        stats: SearchStats::default(),
    };
    for g in corpus.iter().filter(|g| g.n() <= max_order) {
        out.graphs_checked += 1;
        let copies: Vec<Vec<u32>> =
            copy_edge_sets(g, h).into_iter().map(|c| c.into_iter().map(|e| e.0).collect()).collect();
        if copies.is_empty() {
            // every coloring is H-free, so no edge pair is tied
            continue;
        }
        let (o, st) = solve_fixed(g.m(), q, &copies, vec![None; g.m()], opts.solve);
        out.stats.nodes += st.nodes;
        match o {
            Outcome::Found(_) => {}
            Outcome::Exhausted => continue,
            Outcome::Unknown => {
                out.complete = false;
                continue;
            }
        }
        for e in g.edge_ids() {
            for f in g.edge_ids().filter(|&f| f != e) {
                if polarity == Polarity::Negative && f < e {
                    continue;
                }
                if !edge_distance(g, &[e], &[f]).at_least(d) {
                    continue;
                }
                out.pairs_checked += 1;
                let spec = SenderSpec {
                    graph: g.clone(),
                    e,
                    f,
                    polarity,
                    target: h.clone(),
                    q,
                    d,
                    status: Status::Unverified,
                };
                let rep = verify_sender(&spec, opts);
                out.stats.nodes += rep.nodes;
                match rep.overall() {
                    super::Overall::Verified => {
                        out.found = Some(SenderSpec { status: Status::FullyVerified, ..spec });
                        return Ok(out);
                    }
                    super::Overall::Unknown => out.complete = false,
                    _ => {}
                }
            }
        }
    }
    Ok(out)
}

/// Source of signal senders for gadget construction.
pub trait SenderProvider {
    fn sender(&self, h: &Graph, q: u8, d: usize, polarity: Polarity) -> Result<SenderSpec, GadgetError>;
}

/// Supplies path stubs; gadgets built from them are structural only.
#[derive(Clone, Copy, Debug, Default)]
pub struct StubProvider;

impl SenderProvider for StubProvider {
    fn sender(&self, h: &Graph, q: u8, d: usize, polarity: Polarity) -> Result<SenderSpec, GadgetError> {
        make_stub_sender(h, q, d, polarity)
    }
}

/// A fixed collection of senders, such as ones loaded from disk. Requests
/// for a larger distance are met by stringing positive senders in front.
#[derive(Clone, Debug, Default)]
pub struct LibraryProvider {
    pub senders: Vec<SenderSpec>,
}

impl LibraryProvider {
    pub fn new(senders: Vec<SenderSpec>) -> Self {
        LibraryProvider { senders }
    }

    fn best(&self, h: &Graph, q: u8, polarity: Polarity) -> Option<&SenderSpec> {
        self.senders
            .iter()
            .filter(|s| s.q == q && s.polarity == polarity && s.d >= 1 && are_isomorphic(&s.target, h))
            .max_by_key(|s| (s.status, s.d))
    }
}

impl SenderProvider for LibraryProvider {
    fn sender(&self, h: &Graph, q: u8, d: usize, polarity: Polarity) -> Result<SenderSpec, GadgetError> {
        let miss = || GadgetError::Provider(format!("no {polarity:?} sender for this target with q = {q}"));
        let last = self.best(h, q, polarity).ok_or_else(miss)?;
        if last.d >= d {
            return Ok(last.clone());
        }
        let pos = self.best(h, q, Polarity::Positive).ok_or_else(miss)?;
        let k = (d - last.d).div_ceil(pos.d);
        let mut chain = vec![pos.clone(); k];
        chain.push(last.clone());
        let mut s = string_senders(&chain)?;
        // stringing preserves the members' verification
        s.status = chain.iter().map(|c| c.status).min().unwrap();
        Ok(s)
    }
}

/// Senders found by [`search_sender`] on a corpus, one per polarity.
#[derive(Clone, Debug)]
pub struct SearchProvider {
    pub library: LibraryProvider,
}

impl SearchProvider {
    pub fn new(
        h: &Graph,
        q: u8,
        d: usize,
        max_order: usize,
        corpus: &[Graph],
        opts: &VerifyOptions,
    ) -> Result<Self, GadgetError> {
        let mut senders = Vec::new();
        for p in [Polarity::Positive, Polarity::Negative] {
            let r = search_sender(h, q, d, p, max_order, corpus, opts)?;
            let s = r.found.ok_or_else(|| {
                GadgetError::Provider(format!(
                    "no {p:?} sender among {} graphs of order <= {max_order}",
                    r.graphs_checked
                ))
            })?;
            senders.push(s);
        }
        Ok(SearchProvider { library: LibraryProvider::new(senders) })
    }
}

impl SenderProvider for SearchProvider {
    fn sender(&self, h: &Graph, q: u8, d: usize, polarity: Polarity) -> Result<SenderSpec, GadgetError> {
        self.library.sender(h, q, d, polarity)
    }
}

/// On-disk form of a sender: graph6 payloads plus the explicit edge order so
/// edge ids survive a round trip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenderSidecar {
    pub graph6: String,
    pub edges: Vec<(Vertex, Vertex)>,
    pub e: (Vertex, Vertex),
    pub f: (Vertex, Vertex),
    pub polarity: Polarity,
    pub target_graph6: String,
    pub q: u8,
    pub d: usize,
    pub status: Status,
}

impl SenderSidecar {
    pub fn of(s: &SenderSpec) -> Result<Self, GadgetError> {
        Ok(SenderSidecar {
            graph6: write_graph6(&s.graph)?,
            edges: s.graph.edges().to_vec(),
            e: s.graph.endpoints(s.e),
            f: s.graph.endpoints(s.f),
            polarity: s.polarity,
            target_graph6: write_graph6(&s.target)?,
            q: s.q,
            d: s.d,
            status: s.status,
        })
    }

    pub fn to_spec(&self) -> Result<SenderSpec, GadgetError> {
        let g6 = parse_graph6(&self.graph6)?;
        let graph = Graph::from_edges(g6.n(), &self.edges)?;
        if graph.m() != g6.m() || graph.edges().iter().any(|&(u, v)| !g6.has_edge(u, v)) {
            return Err(GadgetError::Interface("edge list disagrees with graph6 payload".into()));
        }
        let id = |(u, v): (Vertex, Vertex)| {
            graph.edge_id(u, v).ok_or_else(|| GadgetError::Interface(format!("{u}-{v} is not an edge")))
        };
        Ok(SenderSpec {
            e: id(self.e)?,
            f: id(self.f)?,
            graph,
            polarity: self.polarity,
            target: parse_graph6(&self.target_graph6)?,
            q: self.q,
            d: self.d,
            status: self.status,
        })
    }
}

/// Loads every `*.json` sender sidecar in `dir`, sorted by file name.
pub fn load_sender_dir(dir: &Path) -> Result<Vec<SenderSpec>, GadgetError> {
    let io = |source| GadgetError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let path = p.display().to_string();
            let text = std::fs::read_to_string(p).map_err(|source| GadgetError::Io { path: path.clone(), source })?;
            let car: SenderSidecar = serde_json::from_str(&text).map_err(|source| GadgetError::Json { path, source })?;
            car.to_spec()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn path_sender(edges_between: usize, polarity: Polarity) -> SenderSpec {
        // proper 2-edge-colorings of a path alternate, so P3-free colorings tie edges
        let n = edges_between + 2;
        let g = families::path(n);
        SenderSpec {
            e: EdgeId(0),
            f: EdgeId((n - 2) as u32),
            graph: g,
            polarity,
            target: families::path(3),
            q: 2,
            d: edges_between - 1,
            status: Status::Unverified,
        }
    }

    #[test]
    fn stub_has_exact_distance() {
        for d in 1..6 {
            let s = make_stub_sender(&families::complete(3), 2, d, Polarity::Negative).unwrap();
            assert_eq!(s.distance(), Distance::Finite(d));
            let r = verify_sender(&s, &VerifyOptions::default());
            assert_eq!(r.status_of("S3"), Some(PropertyStatus::Pass));
            assert_eq!(r.status_of("S1"), Some(PropertyStatus::StructuralOnly));
        }
    }

    #[test]
    fn path_senders_verify() {
        let pos = path_sender(6, Polarity::Positive);
        assert_eq!(verify_sender(&pos, &VerifyOptions::default()).overall(), super::super::Overall::Verified);
        let neg = path_sender(5, Polarity::Negative);
        assert_eq!(verify_sender(&neg, &VerifyOptions::default()).overall(), super::super::Overall::Verified);
        let wrong = SenderSpec { polarity: Polarity::Negative, ..pos };
        let r = verify_sender(&wrong, &VerifyOptions::default());
        assert_eq!(r.status_of("S2"), Some(PropertyStatus::Fail));
        assert!(matches!(r.get("S2").unwrap().counterexample, Some(Evidence::Coloring { .. })));
    }

    #[test]
    fn stringing_adds_distances_and_keeps_polarity() {
        let a = path_sender(6, Polarity::Positive);
        let b = path_sender(5, Polarity::Negative);
        let s = string_senders(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.polarity, Polarity::Negative);
        assert_eq!(s.d, a.d + b.d);
        assert!(s.distance().at_least(s.d));
        assert_eq!(verify_sender(&s, &VerifyOptions::default()).status_of("S2"), Some(PropertyStatus::Pass));
        assert!(string_senders(&[b, a]).is_err());
    }

    #[test]
    fn library_strings_to_reach_distance() {
        let lib = LibraryProvider::new(vec![path_sender(2, Polarity::Positive), path_sender(3, Polarity::Negative)]);
        let s = lib.sender(&families::path(3), 2, 7, Polarity::Negative).unwrap();
        assert!(s.d >= 7 && s.distance().at_least(7));
        assert_eq!(verify_sender(&s, &VerifyOptions::default()).overall(), super::super::Overall::Verified);
    }

    #[test]
    fn sidecar_round_trip() {
        let s = path_sender(5, Polarity::Negative);
        let car = SenderSidecar::of(&s).unwrap();
        let text = serde_json::to_string(&car).unwrap();
        let back: SenderSidecar = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_spec().unwrap(), s);
    }

    #[test]
    fn triangle_senders_do_not_exist_on_four_vertices() {
        let corpus = crate::graph::format::bundled_connected(4);
        let k3 = families::complete(3);
        for p in [Polarity::Positive, Polarity::Negative] {
            let r = search_sender(&k3, 2, 1, p, 4, &corpus, &VerifyOptions::default()).unwrap();
            assert!(r.found.is_none() && r.complete);
            assert!(r.graphs_checked > 0);
        }
    }
}
