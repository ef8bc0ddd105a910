use std::collections::BTreeMap;

use super::report::{Coverage, Evidence, PropertyResult, PropertyStatus, VerificationReport};
use super::{
    binom, check_common, check_interface, count_rgs, for_each_rgs, join_sender, new_edge, solve_fixed, start_with,
    unlabeled, GadgetError, Polarity, Provenance, SenderProvider, Senders, Status, VerifyOptions,
};
use crate::arrowing::Outcome;
use crate::graph::{copy_edge_sets, edge_distance, families, EdgeColoring, EdgeId, Graph, Vertex};
use crate::manifest::ConstructionManifest;
use crate::GraphBuilder;

/// A gadget containing an induced copy of `F` and an edge `e` far from it,
/// where monochromatic `F` forces the color of `e`.
#[derive(Clone, Debug)]
pub struct IndicatorSpec {
    pub graph: Graph,
    /// The indicator subgraph `F` as given to the builder.
    pub f_graph: Graph,
    /// Gadget vertex of each vertex of `f_graph`.
    pub f_map: Vec<Vertex>,
    /// Gadget edge of each edge of `f_graph`.
    pub f_edges: Vec<EdgeId>,
    pub e: EdgeId,
    pub polarity: Polarity,
    pub target: Graph,
    pub q: u8,
    pub d: usize,
    pub status: Status,
    pub provenance: Provenance,
    pub manifest: ConstructionManifest,
}

impl IndicatorSpec {
    /// Joins a copy onto host vertices `f_host` (images of `F`'s vertices) and host edge `e_host`.
    pub fn join(
        &self,
        b: &mut GraphBuilder,
        f_host: &[Vertex],
        e_host: (Vertex, Vertex),
        prefix: &str,
    ) -> Result<Vec<Vertex>, GadgetError> {
        if f_host.len() != self.f_map.len() {
            return Err(GadgetError::Interface(format!(
                "F has {} vertices, got {} host vertices",
                self.f_map.len(),
                f_host.len()
            )));
        }
        let (e0, e1) = self.graph.endpoints(self.e);
        let mut ident: Vec<(Vertex, Vertex)> = self.f_map.iter().copied().zip(f_host.iter().copied()).collect();
        ident.push((e0, e_host.0));
        ident.push((e1, e_host.1));
        Ok(b.attach(&self.graph, &ident, prefix)?)
    }
}

/// Edge of `h` used as `e_1` in the base construction: one with no
/// degree-one endpoint when possible.
fn pick_edges(h: &Graph) -> (EdgeId, EdgeId) {
    let e1 = h
        .edge_ids()
        .find(|&e| {
            let (u, v) = h.endpoints(e);
            h.degree(u) > 1 && h.degree(v) > 1
        })
        .unwrap_or(EdgeId(0));
    let e2 = h.edge_ids().find(|&e| e != e1).unwrap_or(e1);
    (e1, e2)
}

struct Built {
    graph: Graph,
    manifest: ConstructionManifest,
    provenance: Provenance,
}

/// Positive indicator for a two-edge `F` (edges 0 and 1 of `f`).
fn base(h: &Graph, f: &Graph, q: u8, s: &Senders) -> Result<Built, GadgetError> {
    let mut b = GraphBuilder::new();
    let fm = start_with(&mut b, f, "F")?;
    let end = |k: usize| {
        let (u, v) = f.edges()[k];
        (fm[u as usize], fm[v as usize])
    };
    let (f1, f2) = (end(0), end(1));
    let e = new_edge(&mut b, "e")?;
    let hh = unlabeled(h);
    let (he1, he2) = pick_edges(&hh);
    let mut prov = Provenance { depth: 1, ..Default::default() };
    let mut k = 0usize;
    let mut sender = |b: &mut GraphBuilder, p: Polarity, x, y, prov: &mut Provenance| {
        k += 1;
        prov.sender(p);
        join_sender(b, s.get(p), x, y, &format!("s{k}/"))
    };
    if q == 2 {
        let hm = b.attach(&hh, &[], "")?;
        for v in hh.vertices() {
            b.set_label(hm[v as usize], format!("H0.{v}"))?;
        }
        let img = |e: EdgeId| {
            let (u, v) = hh.endpoints(e);
            (hm[u as usize], hm[v as usize])
        };
        for g in hh.edge_ids().filter(|&g| g != he1 && g != he2) {
            sender(&mut b, Polarity::Negative, f1, img(g), &mut prov)?;
        }
        sender(&mut b, Polarity::Negative, f2, img(he2), &mut prov)?;
        sender(&mut b, Polarity::Positive, img(he1), e, &mut prov)?;
    } else {
        let qi = q as usize;
        let mut ms = Vec::with_capacity(qi - 1);
        let mut hs = Vec::with_capacity(qi - 1);
        let (a, c) = hh.endpoints(he1);
        for i in 1..qi {
            ms.push(new_edge(&mut b, &format!("m{i}"))?);
            let hm = b.attach(&hh, &[(a, e.0), (c, e.1)], "")?;
            for v in hh.vertices().filter(|&v| v != a && v != c) {
                b.set_label(hm[v as usize], format!("H{i}.{v}"))?;
            }
            hs.push(hm);
        }
        for m in &ms[..qi - 2] {
            sender(&mut b, Polarity::Negative, f1, *m, &mut prov)?;
        }
        sender(&mut b, Polarity::Negative, f2, ms[qi - 2], &mut prov)?;
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                sender(&mut b, Polarity::Negative, ms[i], ms[j], &mut prov)?;
            }
        }
        for (i, hm) in hs.iter().enumerate() {
            for g in hh.edge_ids().filter(|&g| g != he1) {
                let (u, v) = hh.endpoints(g);
                sender(&mut b, Polarity::Positive, ms[i], (hm[u as usize], hm[v as usize]), &mut prov)?;
            }
        }
    }
    let (graph, manifest) = b.build_with_manifest();
    Ok(Built { graph, manifest, provenance: prov })
}

/// Positive indicator on `f` (at least two edges), by splitting off the last edge.
fn positive(h: &Graph, f: &Graph, q: u8, s: &Senders) -> Result<Built, GadgetError> {
    if f.m() == 2 {
        return base(h, f, q, s);
    }
    let last = EdgeId(f.m() as u32 - 1);
    let rest = f.without_edges(&[last]);
    let inner = positive(h, &rest, q, s)?;
    let pair = positive(h, &families::matching(2), q, s)?;
    let mut b = GraphBuilder::new();
    let fm = start_with(&mut b, f, "F")?;
    let x = new_edge(&mut b, "x")?;
    let e = new_edge(&mut b, "e")?;
    let ie = inner.graph.edge_id(inner.graph.find_label("e.0").unwrap(), inner.graph.find_label("e.1").unwrap()).unwrap();
    let spec_inner = spec_of(&inner, &rest, ie);
    spec_inner.join(&mut b, &fm, x, "i1/")?;
    let (u, v) = f.endpoints(last);
    let pe = pair.graph.edge_id(pair.graph.find_label("e.0").unwrap(), pair.graph.find_label("e.1").unwrap()).unwrap();
    let spec_pair = spec_of(&pair, &families::matching(2), pe);
    spec_pair.join(&mut b, &[fm[u as usize], fm[v as usize], x.0, x.1], e, "i2/")?;
    let mut prov = Provenance { depth: inner.provenance.depth + 1, ..Default::default() };
    prov.absorb("indicator+", &inner.provenance);
    prov.absorb("indicator+", &pair.provenance);
    let (graph, manifest) = b.build_with_manifest();
    Ok(Built { graph, manifest, provenance: prov })
}

/// Interface view of a built gadget; `F` always occupies the first vertices and edges.
fn spec_of(b: &Built, f: &Graph, e: EdgeId) -> IndicatorSpec {
    IndicatorSpec {
        graph: b.graph.clone(),
        f_graph: f.clone(),
        f_map: f.vertices().collect(),
        f_edges: f.edge_ids().collect(),
        e,
        polarity: Polarity::Positive,
        target: Graph::empty(0),
        q: 0,
        d: 0,
        status: Status::Stub,
        provenance: b.provenance.clone(),
        manifest: b.manifest.clone(),
    }
}

/// Builds a positive or negative `(H, F, e)`-indicator. `F` needs at least
/// two edges, must not contain `H`, and must have girth above `v(H)` when
/// `H` is a cycle.
pub fn build_indicator(
    h: &Graph,
    f: &Graph,
    q: u8,
    d: usize,
    polarity: Polarity,
    provider: &dyn SenderProvider,
) -> Result<IndicatorSpec, GadgetError> {
    check_common(h, q, d)?;
    if f.m() < 2 {
        return Err(GadgetError::Precondition("F needs at least two edges".into()));
    }
    check_interface(h, f, "F")?;
    let senders = Senders::fetch(provider, h, q, d)?;
    let f = unlabeled(f);
    let pos = positive(h, &f, q, &senders)?;
    let built = match polarity {
        Polarity::Positive => pos,
        Polarity::Negative => {
            let pe = pos.graph.edge_id(pos.graph.find_label("e.0").unwrap(), pos.graph.find_label("e.1").unwrap()).unwrap();
            let inner = spec_of(&pos, &f, pe);
            let mut b = GraphBuilder::new();
            let fm = start_with(&mut b, &f, "F")?;
            let x = new_edge(&mut b, "x")?;
            let e = new_edge(&mut b, "e")?;
            inner.join(&mut b, &fm, x, "i1/")?;
            join_sender(&mut b, senders.get(Polarity::Negative), x, e, "s1/")?;
            let mut prov = Provenance { depth: pos.provenance.depth, ..Default::default() };
            prov.absorb("indicator+", &pos.provenance);
            prov.sender(Polarity::Negative);
            let (graph, manifest) = b.build_with_manifest();
            Built { graph, manifest, provenance: prov }
        }
    };
    let e = built.graph.edge_id(built.graph.find_label("e.0").unwrap(), built.graph.find_label("e.1").unwrap()).unwrap();
    let mut spec = spec_of(&built, &f, e);
    spec.polarity = polarity;
    spec.target = h.clone();
    spec.q = q;
    spec.d = d;
    spec.status = senders.status();
    if let Some(bad) = structure(&spec).into_iter().find(|p| p.status != PropertyStatus::Pass) {
        return Err(GadgetError::Structure(format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(spec)
}

/// Leaf sender counts predicted from the parameters alone.
pub fn expected_indicator_counts(h_edges: usize, q: u8, f_edges: usize, polarity: Polarity) -> BTreeMap<String, usize> {
    let q = q as usize;
    let (neg, pos) = if q == 2 {
        (h_edges - 1, 1)
    } else {
        ((q - 1) + binom(q - 1, 2), (q - 1) * (h_edges - 1))
    };
    let levels = f_edges - 1;
    let mut out = BTreeMap::new();
    out.insert("sender+".to_string(), levels * pos);
    out.insert("sender-".to_string(), levels * neg + usize::from(polarity == Polarity::Negative));
    out.retain(|_, v| *v > 0);
    out
}

fn structure(s: &IndicatorSpec) -> Vec<PropertyResult> {
    let mut out = Vec::new();
    let induced = s.graph.is_induced_on(&s.f_map, &s.f_edges);
    let dist = edge_distance(&s.graph, &s.f_edges, &[s.e]);
    out.push(if !induced {
        PropertyResult::new("I1", PropertyStatus::Fail, "F is not induced")
            .counterexample(Evidence::NotInduced { vertices: s.f_map.clone() })
    } else if !dist.at_least(s.d) {
        PropertyResult::new("I1", PropertyStatus::Fail, format!("distance(F, e) = {dist} < {}", s.d))
            .counterexample(Evidence::Distance { found: dist, required: s.d })
    } else {
        PropertyResult::new("I1", PropertyStatus::Pass, format!("F induced, distance(F, e) = {dist} >= {}", s.d))
    });
    if s.provenance.depth > 0 {
        let expected = expected_indicator_counts(s.target.m(), s.q, s.f_edges.len(), s.polarity);
        let found = s.provenance.senders.clone();
        out.push(if expected == found {
            PropertyResult::new("counts", PropertyStatus::Pass, format!("sender counts {found:?}"))
        } else {
            PropertyResult::new("counts", PropertyStatus::Fail, "sender counts differ from the closed form")
                .counterexample(Evidence::Counts { expected, found })
        });
    }
    out
}

fn params(s: &IndicatorSpec) -> serde_json::Value {
    serde_json::json!({
        "polarity": s.polarity,
        "q": s.q,
        "d": s.d,
        "n": s.graph.n(),
        "m": s.graph.m(),
        "f_edges": s.f_edges.iter().map(|e| e.0).collect::<Vec<_>>(),
        "e": s.e.0,
        "status": s.status,
        "depth": s.provenance.depth,
    })
}

fn pairs(fixed: &[Option<u8>]) -> Vec<(u32, u8)> {
    fixed.iter().enumerate().filter_map(|(e, c)| c.map(|c| (e as u32, c))).collect()
}

/// Checks I1 structurally, then I2 (monochromatic `F` extends), I3 (and
/// forces `e`) and I4 (every non-constant coloring of `F` extends with
/// every color on `e`).
pub fn verify_indicator(s: &IndicatorSpec, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport::new("indicator", params(s));
    for p in structure(s) {
        r.push(p);
    }
    if s.status == Status::Stub {
        for name in ["I2", "I3", "I4"] {
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
        Outcome::Found(c) => PropertyResult::new("I2", PropertyStatus::Pass, "monochromatic F extends")
            .witness(Evidence::coloring(&EdgeColoring::total(q, c).unwrap())),
        Outcome::Exhausted => PropertyResult::new("I2", PropertyStatus::Fail, "monochromatic F does not extend")
            .counterexample(Evidence::NotExtendable { pairs: pairs(&mono), nodes: st.nodes }),
        Outcome::Unknown => PropertyResult::new("I2", PropertyStatus::BudgetExhausted, "budget exhausted"),
    });
    let mut forced = mono.clone();
    forced[s.e.index()] = Some(if s.polarity == Polarity::Positive { 1 } else { 0 });
    let (o, st) = solve_fixed(m, q, &copies, forced, opts.solve);
    r.nodes += st.nodes;
    let want = if s.polarity == Polarity::Positive { "c(e) = c(F)" } else { "c(e) != c(F)" };
    r.push(match o {
        Outcome::Found(c) => PropertyResult::new("I3", PropertyStatus::Fail, format!("extension violates {want}"))
            .counterexample(Evidence::coloring(&EdgeColoring::total(q, c).unwrap())),
        Outcome::Exhausted => PropertyResult::new("I3", PropertyStatus::Pass, format!("monochromatic F forces {want}"))
            .witness(Evidence::Exhausted { nodes: st.nodes }),
        Outcome::Unknown => PropertyResult::new("I3", PropertyStatus::BudgetExhausted, "budget exhausted"),
    });
    // Colorings of F up to renaming; the color of e then ranges over all q values.
    let fl = s.f_edges.len();
    let total = (count_rgs(fl, q) - 1) * q as u64;
    let mut checked = 0u64;
    let mut result = None;
    let mut unknown = false;
    for_each_rgs(fl, q, |phi| {
        if phi.iter().all(|&c| c == 0) {
            return true;
        }
        for k in 0..q {
            if checked >= opts.max_cases {
                return false;
            }
            checked += 1;
            let mut fixed = vec![None; m];
            for (i, &f) in s.f_edges.iter().enumerate() {
                fixed[f.index()] = Some(phi[i]);
            }
            fixed[s.e.index()] = Some(k);
            let (o, st) = solve_fixed(m, q, &copies, fixed.clone(), opts.solve);
            r.nodes += st.nodes;
            match o {
                Outcome::Found(_) => {}
                Outcome::Exhausted => {
                    result = Some(
                        PropertyResult::new("I4", PropertyStatus::Fail, format!("phi_F = {phi:?}, c(e) = {k} does not extend"))
                            .counterexample(Evidence::NotExtendable { pairs: pairs(&fixed), nodes: st.nodes }),
                    );
                    return false;
                }
                Outcome::Unknown => unknown = true,
            }
        }
        true
    });
    let cov = Coverage { checked, total, sampled: false };
    r.push(
        match result {
            Some(fail) => fail,
            None if unknown => PropertyResult::new("I4", PropertyStatus::BudgetExhausted, "budget exhausted on some case"),
            None if checked < total => {
                PropertyResult::new("I4", PropertyStatus::Partial, format!("{checked} of {total} cases extend"))
            }
            None => PropertyResult::new("I4", PropertyStatus::Pass, format!("all {total} cases extend")),
        }
        .coverage(cov),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::StubProvider;

    #[test]
    fn base_case_counts_for_triangles() {
        let k3 = families::complete(3);
        let s = build_indicator(&k3, &families::matching(2), 2, 4, Polarity::Positive, &StubProvider).unwrap();
        assert_eq!(s.provenance.depth, 1);
        assert_eq!(s.provenance.senders["sender-"], 2);
        assert_eq!(s.provenance.senders["sender+"], 1);
        assert!(s.graph.find_label("H0.0").is_some());
        let r = verify_indicator(&s, &VerifyOptions::default());
        assert_eq!(r.status_of("I1"), Some(PropertyStatus::Pass));
        assert_eq!(r.status_of("counts"), Some(PropertyStatus::Pass));
        assert_eq!(r.status_of("I4"), Some(PropertyStatus::StructuralOnly));
    }

    #[test]
    fn recursion_depth_follows_edge_count() {
        let k3 = families::complete(3);
        for k in 2..6 {
            for p in [Polarity::Positive, Polarity::Negative] {
                let s = build_indicator(&k3, &families::matching(k), 3, 4, p, &StubProvider).unwrap();
                assert_eq!(s.provenance.depth, k - 1);
                assert_eq!(s.provenance.senders, expected_indicator_counts(3, 3, k, p));
            }
        }
    }

    #[test]
    fn rejects_f_containing_target() {
        let k3 = families::complete(3);
        let err = build_indicator(&k3, &families::complete(4), 2, 4, Polarity::Positive, &StubProvider);
        assert!(matches!(err, Err(GadgetError::TargetContained(_))));
        let c5 = families::cycle(5);
        let err = build_indicator(&c5, &families::cycle(4), 2, 6, Polarity::Positive, &StubProvider);
        assert!(matches!(err, Err(GadgetError::Precondition(_))));
    }
}
