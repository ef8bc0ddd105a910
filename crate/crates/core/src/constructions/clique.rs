use std::collections::BTreeMap;

use super::ConstructionError;
use crate::gadgets::{
    join_sender, Evidence, PropertyResult, PropertyStatus, Polarity, Provenance, SenderProvider, Senders, Status,
};
use crate::graph::pattern::ColorPattern;
use crate::graph::{distance, families, EdgeColoring, EdgeId, Graph, Vertex};
use crate::manifest::ConstructionManifest;
use crate::GraphBuilder;

/// Largest complete graph the ladder will materialize.
pub const MAX_LADDER_ORDER: usize = 1024;

/// The colorings `φ_q` of `K_{N}` and `ψ_q` of `K_{N+1}`, `N = (t − 1)^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueLadder {
    pub t: usize,
    pub q: u8,
    pub n: usize,
    /// Top-level parts `Q_1..Q_{t−1}` of `0..n`.
    pub blocks: Vec<Vec<Vertex>>,
    /// Indexed like the edges of `families::complete(n)`.
    pub phi: EdgeColoring,
    /// Indexed like the edges of `families::complete(n + 1)`; vertex `n` is the extra vertex.
    pub psi: EdgeColoring,
}

fn ladder_order(q: u8, t: usize) -> Result<usize, ConstructionError> {
    if q < 2 || t < 3 {
        return Err(ConstructionError::Precondition(format!("need q >= 2 and t >= 3, got q = {q}, t = {t}")));
    }
    let n = (t - 1).saturating_pow(q as u32);
    if n >= MAX_LADDER_ORDER {
        return Err(ConstructionError::TooLarge { order: n.saturating_add(1), limit: MAX_LADDER_ORDER });
    }
    Ok(n)
}

fn phi(q: u8, t: usize, a: usize, b: usize) -> u8 {
    let s = (t - 1).pow(q as u32 - 1);
    if a / s != b / s {
        q - 1
    } else if q == 2 {
        0
    } else {
        phi(q - 1, t, a % s, b % s)
    }
}

/// `n = (t − 1)^q` is the extra vertex.
fn psi(q: u8, t: usize, a: usize, b: usize) -> u8 {
    let n = (t - 1).pow(q as u32);
    let (a, b) = (a.min(b), a.max(b));
    let s = (t - 1).pow(q as u32 - 1);
    if q == 2 {
        let special = |x: usize| x.is_multiple_of(t - 1);
        if b == n {
            return if special(a) { 1 } else { 0 };
        }
        if a == 0 && b == t - 1 {
            return 0;
        }
        return phi(2, t, a, b);
    }
    if b == n {
        return psi(q - 1, t, a % s, s);
    }
    if a / s != b / s {
        q - 1
    } else {
        psi(q - 1, t, a % s, b % s)
    }
}

fn color_complete(n: usize, q: u8, f: impl Fn(usize, usize) -> u8) -> EdgeColoring {
    let colors = families::complete(n).edges().iter().map(|&(a, b)| f(a as usize, b as usize)).collect();
    EdgeColoring::total(q, colors).expect("ladder colors are below q")
}

pub fn phi_coloring(q: u8, t: usize) -> Result<EdgeColoring, ConstructionError> {
    let n = ladder_order(q, t)?;
    Ok(color_complete(n, q, |a, b| phi(q, t, a, b)))
}

pub fn psi_coloring(q: u8, t: usize) -> Result<EdgeColoring, ConstructionError> {
    let n = ladder_order(q, t)?;
    Ok(color_complete(n + 1, q, |a, b| psi(q, t, a, b)))
}

pub fn clique_ladder(q: u8, t: usize) -> Result<CliqueLadder, ConstructionError> {
    let n = ladder_order(q, t)?;
    let s = n / (t - 1);
    let blocks = (0..t - 1).map(|i| (i * s..(i + 1) * s).map(|v| v as Vertex).collect()).collect();
    Ok(CliqueLadder { t, q, n, blocks, phi: phi_coloring(q, t)?, psi: psi_coloring(q, t)? })
}

/// The graph built from a base graph `G` with a `K_t`-free pattern
/// `{G_1..G_q}`: a matching `e_1..e_q` with negative senders between each pair,
/// positive senders from `e_i` to every edge of `G_i`, and a vertex `v`
/// joined to all of `V(G)`.
#[derive(Clone, Debug)]
pub struct CliqueGtilde {
    pub graph: Graph,
    pub t: usize,
    pub q: u8,
    pub d: usize,
    /// `G` sits on vertices `0..base.n()` with its edge ids unchanged.
    pub base: Graph,
    pub classes: Vec<Vec<EdgeId>>,
    pub v: Vertex,
    pub matching: Vec<EdgeId>,
    /// Whether the base is known to attain `P_q(t − 1)`. The ladder base is only an upper-bound witness.
    pub base_optimal: bool,
    pub status: Status,
    pub provenance: Provenance,
    pub manifest: ConstructionManifest,
}

/// Builds the graph on `base` (defaults to `K_{(t−1)^q}` colored by `φ_q`).
pub fn build_clique_gtilde(
    t: usize,
    q: u8,
    base: Option<(Graph, ColorPattern)>,
    provider: &dyn SenderProvider,
) -> Result<CliqueGtilde, ConstructionError> {
    let (g, pattern, base_optimal) = match base {
        Some((g, p)) => (g, p, false),
        None => {
            let n = ladder_order(q, t)?;
            (families::complete(n), phi_coloring(q, t)?.pattern()?, false)
        }
    };
    if pattern.q() != q as usize {
        return Err(ConstructionError::Precondition(format!("base pattern has {} classes, need {q}", pattern.q())));
    }
    let kt = families::complete(t);
    if !pattern.is_h_free(&g, &kt) {
        return Err(ConstructionError::Precondition(format!("base pattern contains a monochromatic K_{t}")));
    }
    let d = t + 1;
    let senders = Senders::fetch(provider, &kt, q, d)?;
    let mut b = GraphBuilder::new();
    for i in g.vertices() {
        b.add_vertex(Some(format!("G{i}")))?;
    }
    for &(x, y) in g.edges() {
        b.add_edge(x, y)?;
    }
    let v = b.add_vertex(Some("v".into()))?;
    let mut ms = Vec::new();
    for i in 0..q {
        let x = b.add_vertex(Some(format!("M.{i}.0")))?;
        let y = b.add_vertex(Some(format!("M.{i}.1")))?;
        b.add_edge(x, y)?;
        ms.push((x, y));
    }
    let mut prov = Provenance::default();
    for i in 0..q as usize {
        for j in i + 1..q as usize {
            join_sender(&mut b, senders.get(Polarity::Negative), ms[i], ms[j], &format!("m{i}.{j}/"))?;
            prov.sender(Polarity::Negative);
        }
    }
    let classes = pattern.classes().to_vec();
    for (i, class) in classes.iter().enumerate() {
        for &e in class {
            join_sender(&mut b, senders.get(Polarity::Positive), ms[i], g.endpoints(e), &format!("g{i}.{}/", e.0))?;
            prov.sender(Polarity::Positive);
        }
    }
    for u in g.vertices() {
        b.add_edge(v, u)?;
    }
    let (graph, mut manifest) = b.build_with_manifest();
    manifest.anchors.insert("v".into(), vec![v]);
    manifest.anchors.insert("M".into(), ms.iter().flat_map(|&(x, y)| [x, y]).collect());
    let matching = ms.iter().map(|&(x, y)| graph.edge_id(x, y).expect("matching edge")).collect();
    let out = CliqueGtilde {
        graph,
        t,
        q,
        d,
        base: g,
        classes,
        v,
        matching,
        base_optimal,
        status: senders.status(),
        provenance: prov,
        manifest,
    };
    if let Some(bad) = out.structure().into_iter().find(|p| p.status != PropertyStatus::Pass) {
        return Err(ConstructionError::Precondition(format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(out)
}

impl CliqueGtilde {
    /// `C(q, 2)` negative and `Σ|E(G_i)|` positive senders.
    pub fn expected_counts(&self) -> BTreeMap<String, usize> {
        let q = self.q as usize;
        let mut out = BTreeMap::new();
        if q >= 2 {
            out.insert("sender-".to_string(), q * (q - 1) / 2);
        }
        let pos: usize = self.classes.iter().map(Vec::len).sum();
        if pos > 0 {
            out.insert("sender+".to_string(), pos);
        }
        out
    }

    pub fn structure(&self) -> Vec<PropertyResult> {
        let mut out = Vec::new();
        let found = self.provenance.senders.clone();
        let expected = self.expected_counts();
        out.push(if found == expected {
            PropertyResult::new("counts", PropertyStatus::Pass, "sender copies match the construction")
        } else {
            PropertyResult::new("counts", PropertyStatus::Fail, "sender copy counts differ")
                .counterexample(Evidence::Counts { expected, found })
        });
        let m_vertices = self.graph.edge_vertices(&self.matching);
        let dist = distance(&self.graph, &[self.v], &m_vertices);
        let required = self.t + 1;
        out.push(if dist.at_least(required) {
            PropertyResult::new("distance", PropertyStatus::Pass, format!("dist(v, M) = {dist:?} exceeds v(K_t)"))
        } else {
            PropertyResult::new("distance", PropertyStatus::Fail, format!("dist(v, M) = {dist:?}"))
                .counterexample(Evidence::Distance { found: dist, required })
        });
        let deg = self.graph.degree(self.v);
        out.push(if deg == self.base.n() {
            PropertyResult::new("degree", PropertyStatus::Pass, format!("d(v) = |V(G)| = {deg}"))
        } else {
            PropertyResult::new("degree", PropertyStatus::Fail, format!("d(v) = {deg}, |V(G)| = {}", self.base.n()))
        });
        let gv: Vec<Vertex> = self.base.vertices().collect();
        let ge: Vec<EdgeId> = self.base.edge_ids().collect();
        out.push(if self.graph.is_induced_on(&gv, &ge) {
            PropertyResult::new("induced", PropertyStatus::Pass, "G is induced")
        } else {
            PropertyResult::new("induced", PropertyStatus::Fail, "G is not induced")
                .counterexample(Evidence::NotInduced { vertices: gv })
        });
        out
    }
}
