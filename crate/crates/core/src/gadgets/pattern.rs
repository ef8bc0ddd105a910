use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gni::{add_counts, build_gni, expected_gni_counts, Tie};
use super::report::{Coverage, Evidence, PropertyResult, PropertyStatus, VerificationReport};
use super::{
    binom, check_common, count_rgs, for_each_rgs, new_edge, solve_fixed, start_with, unlabeled, GadgetError, Polarity,
    Provenance, SenderProvider, Senders, Status, VerifyOptions,
};
use crate::arrowing::Outcome;
use crate::graph::pattern::PatternFamily;
use crate::graph::{are_isomorphic, copy_edge_sets, families, EdgeColoring, EdgeId, Graph, Vertex};
use crate::manifest::ConstructionManifest;
use crate::GraphBuilder;

/// Gadget containing an induced `G` whose H-free colorings restrict to
/// exactly the patterns of a family.
#[derive(Clone, Debug)]
pub struct PatternGadgetSpec {
    pub graph: Graph,
    pub family: PatternFamily,
    /// Gadget vertex of each vertex of `family.base`; edges of the base keep their ids.
    pub g_map: Vec<Vertex>,
    pub g_edges: Vec<EdgeId>,
    pub r: usize,
    /// The matching `M`, in order.
    pub matching: Vec<EdgeId>,
    /// Each `r`-subset of `M` (as indices into `matching`) and the pattern it selects.
    pub assignment: Vec<(Vec<usize>, usize)>,
    pub target: Graph,
    pub q: u8,
    pub d: usize,
    pub status: Status,
    pub provenance: Provenance,
    pub manifest: ConstructionManifest,
}

/// Least `r >= 1` with `C((r - 1) q + 1, r) >= patterns`.
pub fn choose_r(q: u8, patterns: usize) -> usize {
    let q = q as usize;
    (1..).find(|&r| binom((r - 1) * q + 1, r) >= patterns).unwrap()
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = r;
        while i > 0 && cur[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Builds a pattern gadget for `family` (patterns over `family.base`, all H-free).
pub fn build_pattern_gadget(
    h: &Graph,
    family: &PatternFamily,
    q: u8,
    d: usize,
    provider: &dyn SenderProvider,
) -> Result<PatternGadgetSpec, GadgetError> {
    check_common(h, q, d)?;
    if family.is_empty() {
        return Err(GadgetError::Precondition("pattern family is empty".into()));
    }
    if let Some(p) = family.patterns.iter().position(|p| p.q() != q as usize) {
        return Err(GadgetError::Precondition(format!("pattern {p} does not have {q} classes")));
    }
    if !family.all_h_free(h) {
        return Err(GadgetError::Precondition("every pattern must be H-free".into()));
    }
    if d <= h.n() {
        return Err(GadgetError::Precondition(format!("d = {d} must exceed v(H) = {}", h.n())));
    }
    let senders = Senders::fetch(provider, h, q, d)?;
    let g = unlabeled(&family.base);
    let qi = q as usize;
    let r = choose_r(q, family.len());
    let msize = (r - 1) * qi + 1;
    let a_graph = families::matching(r);
    let pos_a = Tie::new(h, &a_graph, q, d, Polarity::Positive, provider)?;
    let mut b = GraphBuilder::new();
    let gm = start_with(&mut b, &g, "G")?;
    let ms: Vec<(Vertex, Vertex)> =
        (0..msize).map(|j| new_edge(&mut b, &format!("M.{j}"))).collect::<Result<_, _>>()?;
    let mut prov = Provenance::default();
    let mut gnis: BTreeMap<usize, (super::GniSpec, Vec<Vertex>)> = BTreeMap::new();
    let mut assignment = Vec::new();
    for (idx, a) in subsets(msize, r).into_iter().enumerate() {
        let pi = if idx < family.len() { idx } else { 0 };
        let classes = family.patterns[pi].classes();
        let a_host: Vec<Vertex> = a.iter().flat_map(|&j| [ms[j].0, ms[j].1]).collect();
        for &e in &classes[qi - 1] {
            let (u, v) = g.endpoints(e);
            pos_a.join(&mut b, &senders, &a_host, (gm[u as usize], gm[v as usize]), &format!("a{idx}.{}/", e.0), &mut prov)?;
        }
        if let std::collections::btree_map::Entry::Vacant(e) = gnis.entry(pi) {
            // G part: the subgraph spanned by the first q - 1 classes
            let spanned: Vec<EdgeId> = classes[..qi - 1].iter().flatten().copied().collect();
            let mut verts = g.edge_vertices(&spanned);
            verts.sort_unstable();
            let local = |v: Vertex| verts.binary_search(&v).unwrap() as Vertex;
            let sub_edges: Vec<(Vertex, Vertex)> = classes[..qi - 1]
                .iter()
                .flatten()
                .map(|&e| {
                    let (u, v) = g.endpoints(e);
                    (local(u), local(v))
                })
                .collect();
            let sub = Graph::from_edges(verts.len(), &sub_edges)?;
            let mut next = 0u32;
            let sub_classes: Vec<Vec<EdgeId>> = classes[..qi - 1]
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|_| {
                            next += 1;
                            EdgeId(next - 1)
                        })
                        .collect()
                })
                .collect();
            let gni = build_gni(h, &a_graph, &sub, &sub_classes, q, d, provider)?;
            e.insert((gni, verts));
        }
        let (gni, verts) = &gnis[&pi];
        let g_host: Vec<Vertex> = verts.iter().map(|&v| gm[v as usize]).collect();
        prov.absorb("gni", &gni.provenance);
        gni.join(&mut b, &a_host, &g_host, &format!("n{idx}/"))?;
        assignment.push((a, pi));
    }
    let (graph, manifest) = b.build_with_manifest();
    let spec = PatternGadgetSpec {
        g_map: g.vertices().collect(),
        g_edges: g.edge_ids().collect(),
        matching: ms.iter().map(|&(u, v)| graph.edge_id(u, v).unwrap()).collect(),
        graph,
        family: family.clone(),
        r,
        assignment,
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

/// Leaf sender counts predicted from the parameters and the subset assignment.
pub fn expected_pattern_counts(
    h_edges: usize,
    q: u8,
    family: &PatternFamily,
    assignment: &[(Vec<usize>, usize)],
) -> BTreeMap<String, usize> {
    let qi = q as usize;
    let r = choose_r(q, family.len());
    let mut out = BTreeMap::new();
    let ind = Tie::leaf_counts(h_edges, q, r, Polarity::Positive);
    for (_, pi) in assignment {
        let classes = family.patterns[*pi].classes();
        add_counts(&mut out, &ind, classes[qi - 1].len());
        let spanned: usize = classes[..qi - 1].iter().map(Vec::len).sum();
        add_counts(&mut out, &expected_gni_counts(h_edges, q, r, spanned), 1);
    }
    out
}

fn structure(s: &PatternGadgetSpec) -> Vec<PropertyResult> {
    let mut out = Vec::new();
    out.push(if s.graph.is_induced_on(&s.g_map, &s.g_edges) {
        PropertyResult::new("P1", PropertyStatus::Pass, "G is an induced subgraph")
    } else {
        PropertyResult::new("P1", PropertyStatus::Fail, "G is not induced")
            .counterexample(Evidence::NotInduced { vertices: s.g_map.clone() })
    });
    let msize = (s.r - 1) * s.q as usize + 1;
    let subsets_ok = s.assignment.len() == binom(msize, s.r) && s.matching.len() == msize;
    let expected = expected_pattern_counts(s.target.m(), s.q, &s.family, &s.assignment);
    let found = s.provenance.senders.clone();
    out.push(if subsets_ok && expected == found {
        PropertyResult::new("counts", PropertyStatus::Pass, format!("r = {}, {} subsets, sender counts {found:?}", s.r, s.assignment.len()))
    } else {
        PropertyResult::new("counts", PropertyStatus::Fail, "gadget counts differ from the closed form")
            .counterexample(Evidence::Counts { expected, found })
    });
    out
}

fn params(s: &PatternGadgetSpec) -> serde_json::Value {
    serde_json::json!({
        "q": s.q,
        "d": s.d,
        "r": s.r,
        "patterns": s.family.len(),
        "mode": s.family.mode,
        "n": s.graph.n(),
        "m": s.graph.m(),
        "status": s.status,
    })
}

/// True when `h` is a clique with one pendant edge; returns the clique size.
fn clique_pendant_size(h: &Graph) -> Option<usize> {
    let (core, _) = h.drop_isolated();
    let t = core.n().checked_sub(1)?;
    (t >= 3 && are_isomorphic(&core, &families::clique_with_pendant(t))).then_some(t)
}

/// Checks P1 structurally, then P2 (every H-free coloring restricts into the
/// family) and P3 (every pattern of the family extends).
pub fn verify_pattern_gadget(s: &PatternGadgetSpec, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport::new("pattern_gadget", params(s));
    for p in structure(s) {
        r.push(p);
    }
    if s.status == Status::Stub {
        for name in ["P2", "P3"] {
            r.push(PropertyResult::new(name, PropertyStatus::StructuralOnly, "contains stub senders"));
        }
        return r;
    }
    let copies: Vec<Vec<u32>> =
        copy_edge_sets(&s.graph, &s.target).into_iter().map(|c| c.into_iter().map(|e| e.0).collect()).collect();
    let mut nodes = 0;
    r.push(p2(s, &copies, opts, &mut nodes));
    let (p3, witnesses) = p3(s, &copies, opts, &mut nodes);
    r.nodes += nodes;
    r.push(p3);
    if let Some(t) = clique_pendant_size(&s.target) {
        r.push(special(s, t, &witnesses));
    }
    r
}

fn p2(s: &PatternGadgetSpec, copies: &[Vec<u32>], opts: &VerifyOptions, nodes: &mut u64) -> PropertyResult {
    let m = s.graph.m();
    let q = s.q;
    let ge = s.g_edges.len();
    let g_copies = copy_edge_sets(&s.family.base, &s.target);
    let mut checked = 0u64;
    let mut fail = None;
    let mut unknown = false;
    let mut check = |col: &[u8], nodes: &mut u64| -> bool {
        let c = EdgeColoring::total(q, col.to_vec()).unwrap();
        if c.monochromatic_copy(&g_copies).is_some() {
            return true;
        }
        let pat = c.pattern().unwrap();
        if s.family.contains(&pat) {
            return true;
        }
        checked += 1;
        let mut fixed = vec![None; m];
        for (i, e) in s.g_edges.iter().enumerate() {
            fixed[e.index()] = Some(col[i]);
        }
        let (o, st) = solve_fixed(m, q, copies, fixed, opts.solve);
        *nodes += st.nodes;
        match o {
            Outcome::Found(c) => {
                fail = Some(Evidence::coloring(&EdgeColoring::total(q, c).unwrap()));
                false
            }
            Outcome::Exhausted => true,
            Outcome::Unknown => {
                unknown = true;
                true
            }
        }
    };
    let space = count_rgs(ge, q);
    let sampled = space > opts.max_cases;
    if !sampled {
        for_each_rgs(ge, q, |col| check(col, nodes));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.max_cases {
            let col: Vec<u8> = (0..ge).map(|_| rng.gen_range(0..q)).collect();
            if !check(&col, nodes) {
                break;
            }
        }
    }
    let cov = Coverage { checked, total: space, sampled };
    match fail {
        Some(ev) => PropertyResult::new("P2", PropertyStatus::Fail, "an H-free coloring restricts outside the family")
            .counterexample(ev),
        None if unknown => PropertyResult::new("P2", PropertyStatus::BudgetExhausted, "budget exhausted on some case"),
        None if sampled => PropertyResult::new("P2", PropertyStatus::Partial, format!("{checked} sampled outside patterns do not extend")),
        None => PropertyResult::new("P2", PropertyStatus::Pass, format!("none of {checked} outside patterns extends")),
    }
    .coverage(cov)
}

fn p3(
    s: &PatternGadgetSpec,
    copies: &[Vec<u32>],
    opts: &VerifyOptions,
    nodes: &mut u64,
) -> (PropertyResult, Vec<EdgeColoring>) {
    let m = s.graph.m();
    let mut witnesses = Vec::new();
    let mut unknown = false;
    for (i, p) in s.family.patterns.iter().enumerate() {
        let c = p.to_coloring(s.g_edges.len());
        let mut fixed = vec![None; m];
        for (k, e) in s.g_edges.iter().enumerate() {
            fixed[e.index()] = c.get(EdgeId(k as u32));
        }
        let (o, st) = solve_fixed(m, s.q, copies, fixed.clone(), opts.solve);
        *nodes += st.nodes;
        match o {
            Outcome::Found(c) => witnesses.push(EdgeColoring::total(s.q, c).unwrap()),
            Outcome::Exhausted => {
                let pairs = fixed.iter().enumerate().filter_map(|(e, c)| c.map(|c| (e as u32, c))).collect();
                return (
                    PropertyResult::new("P3", PropertyStatus::Fail, format!("pattern {i} does not extend"))
                        .counterexample(Evidence::NotExtendable { pairs, nodes: st.nodes }),
                    witnesses,
                );
            }
            Outcome::Unknown => unknown = true,
        }
    }
    let res = if unknown {
        PropertyResult::new("P3", PropertyStatus::BudgetExhausted, "budget exhausted on some pattern")
    } else {
        PropertyResult::new("P3", PropertyStatus::Pass, format!("all {} patterns extend", s.family.len()))
    };
    (res, witnesses)
}

/// For a clique with a pendant edge: the P3 extensions should have no
/// monochromatic `K_t` touching `G` outside of `G` itself.
fn special(s: &PatternGadgetSpec, t: usize, witnesses: &[EdgeColoring]) -> PropertyResult {
    let mut in_g = vec![false; s.graph.n()];
    for &v in &s.g_map {
        in_g[v as usize] = true;
    }
    let kt = families::complete(t);
    let cliques: Vec<Vec<EdgeId>> = copy_edge_sets(&s.graph, &kt)
        .into_iter()
        .filter(|c| {
            let vs = s.graph.edge_vertices(c);
            vs.iter().any(|&v| in_g[v as usize]) && !vs.iter().all(|&v| in_g[v as usize])
        })
        .collect();
    for (i, w) in witnesses.iter().enumerate() {
        if let Some(c) = w.monochromatic_copy(&cliques) {
            return PropertyResult::new(
                "P3-special",
                PropertyStatus::Fail,
                format!("extension {i} has a monochromatic K_{t} meeting G outside G: {:?}", c.iter().map(|e| e.0).collect::<Vec<_>>()),
            )
            .counterexample(Evidence::coloring(w));
        }
    }
    PropertyResult::new("P3-special", PropertyStatus::Pass, format!("no monochromatic K_{t} meets G from outside"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{Overall, StubProvider};
    use crate::graph::{ColorPattern, FamilyMode};

    #[test]
    fn r_values() {
        assert_eq!(choose_r(2, 1), 1);
        assert_eq!(choose_r(2, 2), 2);
        assert_eq!(choose_r(2, 3), 2);
        assert_eq!(choose_r(2, 4), 3);
        assert_eq!(choose_r(3, 5), 2);
        for q in 2..5u8 {
            for n in 1..40 {
                let r = choose_r(q, n);
                assert!(binom((r - 1) * q as usize + 1, r) >= n);
                assert!(r == 1 || binom((r - 2) * q as usize + 1, r - 1) < n);
            }
        }
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(1, 1), vec![vec![0]]);
    }

    #[test]
    fn stub_gadget_is_structural() {
        let h = families::complete(3);
        let g = families::cycle(4);
        let p1 = ColorPattern::from_classes(4, 2, vec![vec![EdgeId(0), EdgeId(1)], vec![EdgeId(2), EdgeId(3)]]).unwrap();
        let p2 = ColorPattern::from_classes(4, 2, vec![vec![EdgeId(0), EdgeId(2)], vec![EdgeId(1), EdgeId(3)]]).unwrap();
        let fam = PatternFamily::new(g, vec![p1, p2], FamilyMode::Exact);
        let s = build_pattern_gadget(&h, &fam, 2, 4, &StubProvider).unwrap();
        assert_eq!(s.r, 2);
        assert_eq!(s.assignment.len(), 3);
        assert_eq!(s.assignment[2].1, 0);
        let r = verify_pattern_gadget(&s, &VerifyOptions::default());
        assert_eq!(r.status_of("P1"), Some(PropertyStatus::Pass));
        assert_eq!(r.status_of("counts"), Some(PropertyStatus::Pass));
        assert_eq!(r.overall(), Overall::Incomplete);
    }

    #[test]
    fn impoverished_family_on_k5_is_refuted() {
        let k5 = families::complete(5);
        let k4 = families::complete(4);
        // two disjoint edges in one color, the remaining 4-cycle in the other
        let red: Vec<EdgeId> = [(0, 1), (2, 3)].iter().map(|&(u, v)| k4.edge_id(u, v).unwrap()).collect();
        let blue: Vec<EdgeId> = k4.edge_ids().filter(|e| !red.contains(e)).collect();
        let phi = ColorPattern::from_classes(6, 2, vec![red, blue]).unwrap();
        let fam = PatternFamily::new(k4.clone(), vec![phi], FamilyMode::Exact);
        let s = PatternGadgetSpec {
            graph: k5.clone(),
            g_map: vec![0, 1, 2, 3],
            g_edges: k4.edge_ids().map(|e| k5.edge_id(k4.endpoints(e).0, k4.endpoints(e).1).unwrap()).collect(),
            family: fam,
            r: 1,
            matching: Vec::new(),
            assignment: Vec::new(),
            target: families::complete(3),
            q: 2,
            d: 1,
            status: Status::Unverified,
            provenance: Provenance::default(),
            manifest: ConstructionManifest::default(),
        };
        let r = verify_pattern_gadget(&s, &VerifyOptions::default());
        assert_eq!(r.status_of("P2"), Some(PropertyStatus::Fail));
        assert_eq!(r.status_of("P3"), Some(PropertyStatus::Fail));
        assert_eq!(r.overall(), Overall::Refuted);
    }
}
