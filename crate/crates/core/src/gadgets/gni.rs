use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::indicator::{build_indicator, expected_indicator_counts, IndicatorSpec};
use super::report::{Coverage, Evidence, PropertyResult, PropertyStatus, VerificationReport};
use super::{
    binom, check_common, check_interface, count_rgs, for_each_rgs, join_sender, new_edge, solve_fixed, start_with,
    unlabeled, GadgetError, Polarity, Provenance, SenderProvider, Senders, Status, VerifyOptions,
};
use crate::arrowing::Outcome;
use crate::graph::{copy_edge_sets, edge_distance, families, EdgeColoring, EdgeId, Graph, Vertex};
use crate::manifest::ConstructionManifest;
use crate::GraphBuilder;

/// Gadget with induced `F` and `G = G_1 + ... + G_{q-1}` far apart, where
/// monochromatic `F` forces each `G_i` monochromatic and all colors distinct.
#[derive(Clone, Debug)]
pub struct GniSpec {
    pub graph: Graph,
    pub f_graph: Graph,
    pub f_map: Vec<Vertex>,
    pub f_edges: Vec<EdgeId>,
    pub g_graph: Graph,
    pub g_map: Vec<Vertex>,
    pub g_edges: Vec<EdgeId>,
    /// Edge classes `G_1..G_{q-1}`, as edge ids of `g_graph`.
    pub classes: Vec<Vec<EdgeId>>,
    pub target: Graph,
    pub q: u8,
    pub d: usize,
    pub status: Status,
    pub provenance: Provenance,
    pub manifest: ConstructionManifest,
}

impl GniSpec {
    pub fn join(
        &self,
        b: &mut GraphBuilder,
        f_host: &[Vertex],
        g_host: &[Vertex],
        prefix: &str,
    ) -> Result<Vec<Vertex>, GadgetError> {
        if f_host.len() != self.f_map.len() || g_host.len() != self.g_map.len() {
            return Err(GadgetError::Interface("interface size mismatch".into()));
        }
        let ident: Vec<(Vertex, Vertex)> = self
            .f_map
            .iter()
            .copied()
            .zip(f_host.iter().copied())
            .chain(self.g_map.iter().copied().zip(g_host.iter().copied()))
            .collect();
        Ok(b.attach(&self.graph, &ident, prefix)?)
    }
}

/// Joins an `(H, F, e)`-indicator, or a sender when `F` is a single edge.
pub(super) enum Tie {
    Sender(Polarity),
    Indicator(IndicatorSpec),
}

impl Tie {
    pub(super) fn new(
        h: &Graph,
        f: &Graph,
        q: u8,
        d: usize,
        p: Polarity,
        provider: &dyn SenderProvider,
    ) -> Result<Self, GadgetError> {
        if f.m() == 1 {
            Ok(Tie::Sender(p))
        } else {
            Ok(Tie::Indicator(build_indicator(h, f, q, d, p, provider)?))
        }
    }

    pub(super) fn join(
        &self,
        b: &mut GraphBuilder,
        s: &Senders,
        f_host: &[Vertex],
        e: (Vertex, Vertex),
        prefix: &str,
        prov: &mut Provenance,
    ) -> Result<(), GadgetError> {
        match self {
            Tie::Sender(p) => {
                prov.sender(*p);
                join_sender(b, s.get(*p), (f_host[0], f_host[1]), e, prefix)?;
            }
            Tie::Indicator(ind) => {
                prov.absorb(&format!("indicator{}", ind.polarity.sign()), &ind.provenance);
                ind.join(b, f_host, e, prefix)?;
            }
        }
        Ok(())
    }

    /// Leaf senders contributed by one join.
    pub(super) fn leaf_counts(h_edges: usize, q: u8, f_edges: usize, p: Polarity) -> BTreeMap<String, usize> {
        if f_edges == 1 {
            BTreeMap::from([(format!("sender{}", p.sign()), 1)])
        } else {
            expected_indicator_counts(h_edges, q, f_edges, p)
        }
    }
}

pub(super) fn add_counts(into: &mut BTreeMap<String, usize>, from: &BTreeMap<String, usize>, times: usize) {
    for (k, v) in from {
        *into.entry(k.clone()).or_default() += v * times;
    }
    into.retain(|_, v| *v > 0);
}

/// Builds a generalized negative indicator. `classes` partitions the edges
/// of `g` into `q - 1` parts; requires `d > v(H)`.
pub fn build_gni(
    h: &Graph,
    f: &Graph,
    g: &Graph,
    classes: &[Vec<EdgeId>],
    q: u8,
    d: usize,
    provider: &dyn SenderProvider,
) -> Result<GniSpec, GadgetError> {
    check_common(h, q, d)?;
    if d <= h.n() {
        return Err(GadgetError::Precondition(format!("d = {d} must exceed v(H) = {}", h.n())));
    }
    if f.m() == 0 {
        return Err(GadgetError::Precondition("F has no edges".into()));
    }
    if classes.len() != q as usize - 1 {
        return Err(GadgetError::Precondition(format!("need {} classes, got {}", q - 1, classes.len())));
    }
    let mut seen = vec![false; g.m()];
    for &e in classes.iter().flatten() {
        match seen.get_mut(e.index()) {
            Some(s) if !*s => *s = true,
            _ => return Err(GadgetError::Precondition(format!("classes do not partition G (edge {})", e.0))),
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(GadgetError::Precondition("classes do not cover G".into()));
    }
    check_interface(h, f, "F")?;
    if classes.iter().any(|c| !copy_edge_sets(&g.edge_subgraph(c), h).is_empty()) {
        return Err(GadgetError::TargetContained("a class of G"));
    }
    let senders = Senders::fetch(provider, h, q, d)?;
    let f = unlabeled(f);
    let g = unlabeled(g);
    let neg_f = Tie::new(h, &f, q, d, Polarity::Negative, provider)?;
    let pos_pair = build_indicator(h, &families::matching(2), q, d, Polarity::Positive, provider)?;
    let mut b = GraphBuilder::new();
    let fm = start_with(&mut b, &f, "F")?;
    let gm = start_with(&mut b, &g, "G")?;
    let qi = q as usize;
    let mut prov = Provenance::default();
    let mut k = 0usize;
    let mut tag = || {
        k += 1;
        format!("j{k}/")
    };
    let mut ms = Vec::new();
    let mut ps = Vec::new();
    for c in 1..qi {
        ms.push((0..qi).map(|j| new_edge(&mut b, &format!("M{c}.{j}"))).collect::<Result<Vec<_>, _>>()?);
        ps.push((0..2).map(|j| new_edge(&mut b, &format!("P{c}.{j}"))).collect::<Result<Vec<_>, _>>()?);
    }
    for c in 0..qi - 1 {
        for &m in &ms[c] {
            neg_f.join(&mut b, &senders, &fm, m, &tag(), &mut prov)?;
        }
        for i in 0..qi {
            for j in i + 1..qi {
                let (a, bb) = (ms[c][i], ms[c][j]);
                for &p in &ps[c] {
                    prov.absorb("indicator+", &pos_pair.provenance);
                    pos_pair.join(&mut b, &[a.0, a.1, bb.0, bb.1], p, &tag())?;
                }
            }
        }
    }
    for c1 in 0..qi - 1 {
        for c2 in c1 + 1..qi - 1 {
            prov.sender(Polarity::Negative);
            join_sender(&mut b, senders.get(Polarity::Negative), ps[c1][0], ps[c2][0], &tag())?;
        }
    }
    for (c, class) in classes.iter().enumerate() {
        let (p0, p1) = (ps[c][0], ps[c][1]);
        for &e in class {
            let (u, v) = g.endpoints(e);
            prov.absorb("indicator+", &pos_pair.provenance);
            pos_pair.join(&mut b, &[p0.0, p0.1, p1.0, p1.1], (gm[u as usize], gm[v as usize]), &tag())?;
        }
    }
    let (graph, manifest) = b.build_with_manifest();
    let nf = f.n() as Vertex;
    let spec = GniSpec {
        f_map: (0..nf).collect(),
        f_edges: f.edge_ids().collect(),
        g_map: (nf..nf + g.n() as Vertex).collect(),
        g_edges: g.edge_ids().map(|e| EdgeId(e.0 + f.m() as u32)).collect(),
        graph,
        f_graph: f,
        g_graph: g,
        classes: classes.to_vec(),
        target: h.clone(),
        q,
        d,
        status: senders.status(),
        provenance: prov,
        manifest,
    };
    if let Some(bad) = structure(&spec).into_iter().find(|p| p.status != PropertyStatus::Pass) {
        return Err(GadgetError::Structure(format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(spec)
}

/// Leaf sender counts predicted from the parameters alone.
pub fn expected_gni_counts(h_edges: usize, q: u8, f_edges: usize, g_edges: usize) -> BTreeMap<String, usize> {
    let qi = q as usize;
    let mut out = BTreeMap::new();
    add_counts(&mut out, &Tie::leaf_counts(h_edges, q, f_edges, Polarity::Negative), (qi - 1) * qi);
    let pair = expected_indicator_counts(h_edges, q, 2, Polarity::Positive);
    add_counts(&mut out, &pair, (qi - 1) * binom(qi, 2) * 2 + g_edges);
    add_counts(&mut out, &BTreeMap::from([("sender-".to_string(), 1)]), binom(qi - 1, 2));
    out
}

fn structure(s: &GniSpec) -> Vec<PropertyResult> {
    let mut out = Vec::new();
    let f_ok = s.graph.is_induced_on(&s.f_map, &s.f_edges);
    let g_ok = s.graph.is_induced_on(&s.g_map, &s.g_edges);
    let dist = if s.g_edges.is_empty() {
        crate::graph::distance(&s.graph, &s.graph.edge_vertices(&s.f_edges), &s.g_map)
    } else {
        edge_distance(&s.graph, &s.f_edges, &s.g_edges)
    };
    out.push(if !f_ok || !g_ok {
        let vertices = if f_ok { s.g_map.clone() } else { s.f_map.clone() };
        PropertyResult::new("GI1", PropertyStatus::Fail, "F or G is not induced")
            .counterexample(Evidence::NotInduced { vertices })
    } else if !dist.at_least(s.d) {
        PropertyResult::new("GI1", PropertyStatus::Fail, format!("distance(F, G) = {dist} < {}", s.d))
            .counterexample(Evidence::Distance { found: dist, required: s.d })
    } else {
        PropertyResult::new("GI1", PropertyStatus::Pass, format!("F, G induced, distance {dist} >= {}", s.d))
    });
    let expected = expected_gni_counts(s.target.m(), s.q, s.f_edges.len(), s.g_edges.len());
    let found = s.provenance.senders.clone();
    if !found.is_empty() {
        out.push(if expected == found {
            PropertyResult::new("counts", PropertyStatus::Pass, format!("sender counts {found:?}"))
        } else {
            PropertyResult::new("counts", PropertyStatus::Fail, "sender counts differ from the closed form")
                .counterexample(Evidence::Counts { expected, found })
        });
    }
    out
}

fn params(s: &GniSpec) -> serde_json::Value {
    serde_json::json!({
        "q": s.q,
        "d": s.d,
        "n": s.graph.n(),
        "m": s.graph.m(),
        "f_edges": s.f_edges.iter().map(|e| e.0).collect::<Vec<_>>(),
        "classes": s.classes.iter().map(|c| c.iter().map(|e| s.g_edges[e.index()].0).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "status": s.status,
    })
}

fn pairs(fixed: &[Option<u8>]) -> Vec<(u32, u8)> {
    fixed.iter().enumerate().filter_map(|(e, c)| c.map(|c| (e as u32, c))).collect()
}

/// Checks GI1 structurally, then GI2 (monochromatic `F` extends), GI3 (and
/// forces a rainbow of monochromatic classes) and GI4 (non-constant `F`
/// with any H-free coloring of `G` extends).
pub fn verify_gni(s: &GniSpec, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport::new("gni", params(s));
    for p in structure(s) {
        r.push(p);
    }
    if s.status == Status::Stub {
        for name in ["GI2", "GI3", "GI4"] {
            r.push(PropertyResult::new(name, PropertyStatus::StructuralOnly, "contains stub senders"));
        }
        return r;
    }
    let m = s.graph.m();
    let q = s.q;
    let copies: Vec<Vec<u32>> =
        copy_edge_sets(&s.graph, &s.target).into_iter().map(|c| c.into_iter().map(|e| e.0).collect()).collect();
    let mut mono = vec![None; m];
    for &f in &s.f_edges {
        mono[f.index()] = Some(0);
    }
    let (o, st) = solve_fixed(m, q, &copies, mono.clone(), opts.solve);
    r.nodes += st.nodes;
    r.push(match o {
        Outcome::Found(c) => PropertyResult::new("GI2", PropertyStatus::Pass, "monochromatic F extends")
            .witness(Evidence::coloring(&EdgeColoring::total(q, c).unwrap())),
        Outcome::Exhausted => PropertyResult::new("GI2", PropertyStatus::Fail, "monochromatic F does not extend")
            .counterexample(Evidence::NotExtendable { pairs: pairs(&mono), nodes: st.nodes }),
        Outcome::Unknown => PropertyResult::new("GI2", PropertyStatus::BudgetExhausted, "budget exhausted"),
    });
    let mut nodes = 0;
    r.push(gi3(s, &copies, &mono, opts, &mut nodes));
    r.push(gi4(s, &copies, opts, &mut nodes));
    r.nodes += nodes;
    r
}

fn gi3(s: &GniSpec, copies: &[Vec<u32>], mono: &[Option<u8>], opts: &VerifyOptions, nodes: &mut u64) -> PropertyResult {
    let m = s.graph.m();
    let q = s.q;
    let host: Vec<Vec<u32>> = s.classes.iter().map(|c| c.iter().map(|e| s.g_edges[e.index()].0).collect()).collect();
    let mut unknown = false;
    // (a) some class not monochromatic: the class itself becomes a forbidden-monochromatic hyperedge
    for (k, class) in host.iter().enumerate().filter(|(_, c)| c.len() > 1) {
        let mut extra = copies.to_vec();
        extra.push(class.clone());
        let (o, st) = solve_fixed(m, q, &extra, mono.to_vec(), opts.solve);
        *nodes += st.nodes;
        match o {
            Outcome::Found(c) => {
                return PropertyResult::new("GI3", PropertyStatus::Fail, format!("class {} is not monochromatic", k + 1))
                    .counterexample(Evidence::coloring(&EdgeColoring::total(q, c).unwrap()))
            }
            Outcome::Exhausted => {}
            Outcome::Unknown => unknown = true,
        }
    }
    // (b) every class monochromatic, but colors not all distinct from each other and from F
    let nonempty: Vec<usize> = (0..host.len()).filter(|&k| !host[k].is_empty()).collect();
    let mut assign = vec![0u8; nonempty.len()];
    loop {
        let mut used = vec![false; q as usize];
        used[0] = true;
        let rainbow = assign.iter().all(|&c| !std::mem::replace(&mut used[c as usize], true));
        if !rainbow {
            let mut fixed = mono.to_vec();
            for (i, &k) in nonempty.iter().enumerate() {
                for &e in &host[k] {
                    fixed[e as usize] = Some(assign[i]);
                }
            }
            let (o, st) = solve_fixed(m, q, copies, fixed, opts.solve);
            *nodes += st.nodes;
            match o {
                Outcome::Found(c) => {
                    return PropertyResult::new("GI3", PropertyStatus::Fail, format!("class colors {assign:?} are not a rainbow"))
                        .counterexample(Evidence::coloring(&EdgeColoring::total(q, c).unwrap()))
                }
                Outcome::Exhausted => {}
                Outcome::Unknown => unknown = true,
            }
        }
        // next assignment in [q]^nonempty
        let mut i = 0;
        while i < assign.len() && assign[i] + 1 == q {
            assign[i] = 0;
            i += 1;
        }
        if i == assign.len() {
            break;
        }
        assign[i] += 1;
    }
    if unknown {
        PropertyResult::new("GI3", PropertyStatus::BudgetExhausted, "budget exhausted on some case")
    } else {
        PropertyResult::new("GI3", PropertyStatus::Pass, "monochromatic F forces a rainbow of monochromatic classes")
    }
}

fn gi4(s: &GniSpec, copies: &[Vec<u32>], opts: &VerifyOptions, nodes: &mut u64) -> PropertyResult {
    let m = s.graph.m();
    let q = s.q;
    let fl = s.f_edges.len();
    let interface: Vec<EdgeId> = s.f_edges.iter().chain(&s.g_edges).copied().collect();
    let g_copies = copy_edge_sets(&s.g_graph, &s.target);
    let admissible = |col: &[u8]| {
        col[..fl].iter().any(|&c| c != col[0])
            && g_copies.iter().all(|cp| cp.iter().any(|e| col[fl + e.index()] != col[fl + cp[0].index()]))
    };
    let checked = std::cell::Cell::new(0u64);
    let mut unknown = false;
    let mut fail = None;
    let mut check = |col: &[u8], nodes: &mut u64| -> bool {
        checked.set(checked.get() + 1);
        let mut fixed = vec![None; m];
        for (i, e) in interface.iter().enumerate() {
            fixed[e.index()] = Some(col[i]);
        }
        let (o, st) = solve_fixed(m, q, copies, fixed.clone(), opts.solve);
        *nodes += st.nodes;
        match o {
            Outcome::Found(_) => true,
            Outcome::Exhausted => {
                fail = Some(Evidence::NotExtendable { pairs: pairs(&fixed), nodes: st.nodes });
                false
            }
            Outcome::Unknown => {
                unknown = true;
                true
            }
        }
    };
    let space = count_rgs(interface.len(), q);
    let sampled = space > opts.max_cases;
    if !sampled {
        for_each_rgs(interface.len(), q, |col| !admissible(col) || check(col, nodes));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut tries = 0u64;
        while checked.get() < opts.max_cases && tries < opts.max_cases * 100 {
            tries += 1;
            let col: Vec<u8> = (0..interface.len()).map(|_| rng.gen_range(0..q)).collect();
            if admissible(&col) && !check(&col, nodes) {
                break;
            }
        }
    }
    let checked = checked.get();
    let cov = Coverage { checked, total: space, sampled };
    match fail {
        Some(ev) => PropertyResult::new("GI4", PropertyStatus::Fail, "an admissible interface coloring does not extend")
            .counterexample(ev),
        None if unknown => PropertyResult::new("GI4", PropertyStatus::BudgetExhausted, "budget exhausted on some case"),
        None if sampled => PropertyResult::new("GI4", PropertyStatus::Partial, format!("{checked} sampled cases extend")),
        None => PropertyResult::new("GI4", PropertyStatus::Pass, format!("all {checked} cases up to renaming extend")),
    }
    .coverage(cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{Overall, StubProvider};

    #[test]
    fn gni_counts_match_closed_form() {
        let k3 = families::complete(3);
        let g = families::path(4);
        for q in [2u8, 3] {
            let classes: Vec<Vec<EdgeId>> = (0..q as usize - 1)
                .map(|c| g.edge_ids().filter(|e| e.index() % (q as usize - 1) == c).collect())
                .collect();
            for f in [families::matching(1), families::matching(2)] {
                let s = build_gni(&k3, &f, &g, &classes, q, 4, &StubProvider).unwrap();
                assert_eq!(s.provenance.senders, expected_gni_counts(3, q, f.m(), g.m()));
                let r = verify_gni(&s, &VerifyOptions::default());
                assert_eq!(r.status_of("GI1"), Some(PropertyStatus::Pass));
                assert_eq!(r.overall(), Overall::Incomplete);
            }
        }
    }

    #[test]
    fn unconnected_interfaces_are_refuted() {
        // F and G with nothing tying them together
        let f = families::matching(2);
        let g = families::matching(1);
        let graph = f.disjoint_union(&g);
        let spec = GniSpec {
            graph,
            f_graph: f,
            f_map: vec![0, 1, 2, 3],
            f_edges: vec![EdgeId(0), EdgeId(1)],
            g_graph: g,
            g_map: vec![4, 5],
            g_edges: vec![EdgeId(2)],
            classes: vec![vec![EdgeId(0)]],
            target: families::complete(3),
            q: 2,
            d: 1,
            status: Status::Unverified,
            provenance: Provenance::default(),
            manifest: ConstructionManifest::default(),
        };
        let r = verify_gni(&spec, &VerifyOptions::default());
        assert_eq!(r.status_of("GI3"), Some(PropertyStatus::Fail));
        assert!(matches!(r.get("GI3").unwrap().counterexample, Some(Evidence::Coloring { .. })));
        assert_eq!(r.status_of("GI4"), Some(PropertyStatus::Pass));
    }

    #[test]
    fn rejects_small_distance() {
        let k3 = families::complete(3);
        let g = families::path(3);
        let err = build_gni(&k3, &families::matching(2), &g, &[g.edge_ids().collect()], 2, 3, &StubProvider);
        assert!(matches!(err, Err(GadgetError::Precondition(_))));
    }
}
