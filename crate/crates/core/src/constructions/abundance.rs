use serde::{Deserialize, Serialize};

use super::{restrict, BaseBlock, ConstructionError};
use crate::arrowing::{extend_with_copies, ExtendVerdict, SolveOptions};
use crate::gadgets::{build_pattern_gadget, PatternGadgetSpec, SenderProvider, Status};
use crate::graph::pattern::{ColorPattern, FamilyMode, PatternFamily};
use crate::graph::{copy_edge_sets, families, is_k_connected, EdgeColoring, EdgeId, Graph, Vertex};
use crate::manifest::ConstructionManifest;
use crate::GraphBuilder;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecipeKind {
    Cycle { t: usize },
    Ktk2 { t: usize },
    ThreeConnected,
}

/// A pattern-gadget construction with `k` special vertices whose removal
/// each destroys the Ramsey property.
#[derive(Clone, Debug)]
pub struct AbundanceRecipe {
    pub kind: RecipeKind,
    pub target: Graph,
    pub q: u8,
    pub k: usize,
    pub block: BaseBlock,
    /// Vertex set of each block copy `V_i` inside `graph`.
    pub blocks: Vec<Vec<Vertex>>,
    /// `W_i` inside `graph`.
    pub interfaces: Vec<Vec<Vertex>>,
    /// The special vertices `v_i`.
    pub special: Vec<Vertex>,
    /// Degree every `v_i` is claimed to have.
    pub claimed_degree: usize,
    pub gadget: PatternGadgetSpec,
    pub graph: Graph,
    pub manifest: ConstructionManifest,
}

impl AbundanceRecipe {
    pub fn family(&self) -> &PatternFamily {
        &self.gadget.family
    }

    pub fn status(&self) -> Status {
        self.gadget.status
    }

    /// Vertices of the embedded base graph `G` (the union of the blocks).
    pub fn base_vertices(&self) -> Vec<Vertex> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn degrees_hold(&self) -> bool {
        self.special.iter().all(|&v| self.graph.degree(v) == self.claimed_degree)
    }

    pub fn record(&self) -> RecipeRecord {
        RecipeRecord {
            kind: self.kind,
            q: self.q,
            k: self.k,
            target_edges: self.target.edges().to_vec(),
            block_n: self.block.graph.n(),
            block_edges: self.block.graph.edges().to_vec(),
            w: self.block.w.clone(),
            forcing: self.block.forcing.clone(),
            relaxed: self.block.relaxed.clone(),
            family: self.family().patterns.iter().map(|p| p.classes().to_vec()).collect(),
            special: self.special.clone(),
            claimed_degree: self.claimed_degree,
            n: self.graph.n(),
            m: self.graph.m(),
            status: self.status(),
            manifest: self.manifest.clone(),
        }
    }
}

/// Serializable form of an [`AbundanceRecipe`]. Graphs are stored as edge
/// lists so edge ids, and with them the colorings, survive a round trip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeRecord {
    pub kind: RecipeKind,
    pub q: u8,
    pub k: usize,
    pub target_edges: Vec<(Vertex, Vertex)>,
    pub block_n: usize,
    pub block_edges: Vec<(Vertex, Vertex)>,
    pub w: Vec<Vertex>,
    pub forcing: Vec<Vec<u8>>,
    pub relaxed: Vec<u8>,
    pub family: Vec<Vec<Vec<EdgeId>>>,
    pub special: Vec<Vertex>,
    pub claimed_degree: usize,
    pub n: usize,
    pub m: usize,
    pub status: Status,
    pub manifest: ConstructionManifest,
}

/// `W` on vertices `0..=q`; for every pair `q` internally disjoint paths of
/// length `t − 2`. Forcing coloring: path `p` of each pair in color `p`.
/// Relaxed coloring: path `p` in color `p` except its first edge, which gets
/// `p + 1 mod q`.
pub fn cycle_block(q: u8, t: usize) -> Result<BaseBlock, ConstructionError> {
    if q < 2 {
        return Err(ConstructionError::Precondition("q must be at least 2".into()));
    }
    if t < 4 {
        return Err(ConstructionError::Precondition(format!(
            "C_{t} is excluded: the triangle behaves differently from longer cycles"
        )));
    }
    let qi = q as usize;
    let mut edges = Vec::new();
    let (mut forcing, mut relaxed) = (Vec::new(), Vec::new());
    let mut next = (qi + 1) as Vertex;
    for u in 0..=qi as Vertex {
        for w in u + 1..=qi as Vertex {
            for p in 0..q {
                let mut prev = u;
                for step in 0..t - 2 {
                    let to = if step == t - 3 {
                        w
                    } else {
                        next += 1;
                        next - 1
                    };
                    edges.push((prev, to));
                    forcing.push(p);
                    relaxed.push(if step == 0 { (p + 1) % q } else { p });
                    prev = to;
                }
            }
        }
    }
    let graph = Graph::from_edges(next as usize, &edges)?;
    Ok(BaseBlock { graph, w: (0..=qi as Vertex).collect(), forcing: vec![forcing], relaxed })
}

/// `t − 1` disjoint copies of `K_t`; `W` holds the first vertex of each.
/// Forcing coloring: everything color 0. Relaxed: edge `ab` gets `(a + b) mod 2`,
/// which leaves no copy of `K_t` monochromatic.
pub fn ktk2_block(t: usize) -> Result<BaseBlock, ConstructionError> {
    if t < 3 {
        return Err(ConstructionError::Precondition("t must be at least 3".into()));
    }
    let kt = families::complete(t);
    let mut g = Graph::empty(0);
    for _ in 0..t - 1 {
        g = g.disjoint_union(&kt);
    }
    let relaxed = kt.edges().iter().map(|&(a, b)| ((a + b) % 2) as u8).collect::<Vec<_>>().repeat(t - 1);
    let w = (0..t - 1).map(|i| (i * t) as Vertex).collect();
    Ok(BaseBlock { forcing: vec![vec![0; g.m()]], relaxed, w, graph: g })
}

fn copies_graph(block: &Graph, k: usize) -> Result<Graph, ConstructionError> {
    let nb = block.n() as Vertex;
    let edges: Vec<(Vertex, Vertex)> = (0..k as Vertex)
        .flat_map(|i| block.edges().iter().map(move |&(a, b)| (a + i * nb, b + i * nb)))
        .collect();
    Ok(Graph::from_edges(block.n() * k, &edges)?)
}

/// One member per (forced block, forcing variant): that block gets the
/// forcing coloring, every other block the relaxed one.
fn family_for(block: &BaseBlock, g: &Graph, q: u8, k: usize) -> Result<PatternFamily, ConstructionError> {
    let mut patterns = Vec::new();
    for i in 0..k {
        for f in &block.forcing {
            let colors: Vec<u8> =
                (0..k).flat_map(|l| if l == i { f.clone() } else { block.relaxed.clone() }).collect();
            patterns.push(pattern_of(q, &colors)?);
        }
    }
    Ok(PatternFamily::new(g.clone(), patterns, FamilyMode::Exact))
}

fn pattern_of(q: u8, colors: &[u8]) -> Result<ColorPattern, ConstructionError> {
    Ok(EdgeColoring::total(q, colors.to_vec())?.pattern()?)
}

struct Assembled {
    gadget: PatternGadgetSpec,
    graph: Graph,
    manifest: ConstructionManifest,
}

/// Builds the pattern gadget over `k` block copies and starts a builder
/// holding it, with the gadget's vertex and edge ids unchanged.
fn assemble(
    h: &Graph,
    block: &BaseBlock,
    q: u8,
    k: usize,
    provider: &dyn SenderProvider,
) -> Result<(PatternGadgetSpec, GraphBuilder), ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::Precondition("k must be at least 1".into()));
    }
    let g = copies_graph(&block.graph, k)?;
    let family = family_for(block, &g, q, k)?;
    let gadget = build_pattern_gadget(h, &family, q, h.n() + 1, provider)?;
    let mut b = GraphBuilder::new();
    b.attach(&gadget.graph, &[], "")?;
    Ok((gadget, b))
}

fn finish(
    kind: RecipeKind,
    h: &Graph,
    q: u8,
    k: usize,
    block: BaseBlock,
    a: Assembled,
    special: Vec<Vertex>,
    claimed_degree: usize,
) -> AbundanceRecipe {
    let nb = block.graph.n() as Vertex;
    let blocks = (0..k as Vertex).map(|i| (i * nb..(i + 1) * nb).collect()).collect();
    let interfaces = (0..k as Vertex).map(|i| block.w.iter().map(|&w| w + i * nb).collect()).collect();
    AbundanceRecipe {
        kind,
        target: h.clone(),
        q,
        k,
        block,
        blocks,
        interfaces,
        special,
        claimed_degree,
        gadget: a.gadget,
        graph: a.graph,
        manifest: a.manifest,
    }
}

/// Pattern-gadget construction for `C_t` with `k` vertices of degree `q + 1`.
pub fn build_cycle_abundant(
    q: u8,
    t: usize,
    k: usize,
    provider: &dyn SenderProvider,
) -> Result<AbundanceRecipe, ConstructionError> {
    let block = cycle_block(q, t)?;
    let h = families::cycle(t);
    let (gadget, mut b) = assemble(&h, &block, q, k, provider)?;
    let nb = block.graph.n() as Vertex;
    let mut special = Vec::new();
    for i in 0..k as Vertex {
        let v = b.add_vertex(Some(format!("v{i}")))?;
        for &w in &block.w {
            b.add_edge(v, w + i * nb)?;
        }
        special.push(v);
    }
    let (graph, manifest) = b.build_with_manifest();
    let a = Assembled { gadget, graph, manifest };
    Ok(finish(RecipeKind::Cycle { t }, &h, q, k, block, a, special, q as usize + 1))
}

/// Pattern-gadget construction for `K_t·K_2` (two colors) with `k` vertices
/// of degree `t − 1`: each `W_i` becomes a clique joined to `v_i`, and a
/// pendant edge hangs off the first vertex of `W_i`.
pub fn build_ktk2_abundant(
    t: usize,
    k: usize,
    provider: &dyn SenderProvider,
) -> Result<AbundanceRecipe, ConstructionError> {
    let block = ktk2_block(t)?;
    let h = families::clique_with_pendant(t);
    let (gadget, mut b) = assemble(&h, &block, 2, k, provider)?;
    let nb = block.graph.n() as Vertex;
    let mut special = Vec::new();
    for i in 0..k as Vertex {
        let w: Vec<Vertex> = block.w.iter().map(|&x| x + i * nb).collect();
        let v = b.add_vertex(Some(format!("v{i}")))?;
        for (j, &x) in w.iter().enumerate() {
            for &y in &w[j + 1..] {
                b.add_edge(x, y)?;
            }
        }
        for &x in &w {
            b.add_edge(v, x)?;
        }
        let p = b.add_vertex(Some(format!("e{i}")))?;
        b.add_edge(w[0], p)?;
        special.push(v);
    }
    let (graph, manifest) = b.build_with_manifest();
    let a = Assembled { gadget, graph, manifest };
    Ok(finish(RecipeKind::Ktk2 { t }, &h, 2, k, block, a, special, t - 1))
}

/// Outcome of each engine check on a seed; `None` until checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFlags {
    /// `F →_q H`.
    pub f1: Option<bool>,
    /// `v` and `e` lie in no common copy of `H`.
    pub f2: Option<bool>,
    /// `F − e ↛_q H`.
    pub f3: Option<bool>,
    /// `F − g ↛_q H` for every edge `g` at `v`.
    pub f4: Option<bool>,
}

/// A graph `F` with a vertex `v` and an edge `e` to feed the 3-connected construction.
#[derive(Clone, Debug)]
pub struct ThreeConnectedSeed {
    pub graph: Graph,
    pub v: Vertex,
    pub e: EdgeId,
    pub target: Graph,
    pub q: u8,
    pub flags: SeedFlags,
    /// `c_{1,j}` as colorings of the whole of `F` (restricted later), one per edge at `v`.
    witnesses_g: Vec<EdgeColoring>,
    /// H-free coloring of `F − e`.
    witness_e: Option<EdgeColoring>,
    /// Per edge at `v`: (extends to `F − {e, g_j}`, extends to `F − e`).
    pub c1_checks: Vec<(bool, bool)>,
}

impl ThreeConnectedSeed {
    pub fn new(graph: Graph, v: Vertex, e: EdgeId, target: Graph, q: u8) -> Result<Self, ConstructionError> {
        if v as usize >= graph.n() || e.index() >= graph.m() {
            return Err(ConstructionError::Precondition("v or e is not in F".into()));
        }
        let (a, b) = graph.endpoints(e);
        if a == v || b == v {
            return Err(ConstructionError::Precondition("e must not be incident to v".into()));
        }
        let triangle = target.n() == 3 && target.m() == 3;
        if !triangle && !is_k_connected(&target, 3) {
            return Err(ConstructionError::Precondition("H must be 3-connected or a triangle".into()));
        }
        Ok(ThreeConnectedSeed {
            graph,
            v,
            e,
            target,
            q,
            flags: SeedFlags::default(),
            witnesses_g: Vec::new(),
            witness_e: None,
            c1_checks: Vec::new(),
        })
    }

    /// Edges at `v`, in neighbor order.
    pub fn edges_at_v(&self) -> Vec<EdgeId> {
        self.graph.neighbors(self.v).iter().map(|&w| self.graph.edge_id(self.v, w).unwrap()).collect()
    }

    /// Checks F1 to F4 with the engine and derives the colorings `c_{1,j}`
    /// and `c_2`. Stops at the first failing condition.
    pub fn verify(&mut self, opts: SolveOptions) -> Result<(), ConstructionError> {
        let copies = copy_edge_sets(&self.graph, &self.target);
        let m = self.graph.m();
        let q = self.q;
        let solve = |removed: &[EdgeId], fixed: &[(EdgeId, u8)]| {
            let kept: Vec<Vec<EdgeId>> =
                copies.iter().filter(|c| !c.iter().any(|x| removed.contains(x))).cloned().collect();
            let mut partial = EdgeColoring::uncolored(q, m);
            for &r in removed {
                partial.set(r, 0).expect("color 0 is valid");
            }
            for &(x, c) in fixed {
                partial.set(x, c).expect("fixed color is valid");
            }
            extend_with_copies(&partial, &kept, opts)
        };
        let unknown = |what: &str| ConstructionError::Budget(what.to_string());

        let r = solve(&[], &[]);
        match r.verdict {
            ExtendVerdict::Unknown => return Err(unknown("F1")),
            ExtendVerdict::Extendable => {
                self.flags.f1 = Some(false);
                return Err(ConstructionError::Seed { condition: "F1", detail: "F has an H-free coloring".into() });
            }
            ExtendVerdict::NotExtendable => self.flags.f1 = Some(true),
        }

        let shared = copies.iter().find(|c| c.contains(&self.e) && self.graph.edge_vertices(c).contains(&self.v));
        self.flags.f2 = Some(shared.is_none());
        if let Some(c) = shared {
            return Err(ConstructionError::Seed {
                condition: "F2",
                detail: format!("v and e share the copy on edges {:?}", c.iter().map(|x| x.0).collect::<Vec<_>>()),
            });
        }

        let r = solve(&[self.e], &[]);
        match r.verdict {
            ExtendVerdict::Unknown => return Err(unknown("F3")),
            ExtendVerdict::NotExtendable => {
                self.flags.f3 = Some(false);
                return Err(ConstructionError::Seed { condition: "F3", detail: "F - e still arrows H".into() });
            }
            ExtendVerdict::Extendable => {
                self.flags.f3 = Some(true);
                self.witness_e = r.witness;
            }
        }

        self.witnesses_g.clear();
        for g in self.edges_at_v() {
            let r = solve(&[g], &[]);
            match r.verdict {
                ExtendVerdict::Unknown => return Err(unknown("F4")),
                ExtendVerdict::NotExtendable => {
                    self.flags.f4 = Some(false);
                    return Err(ConstructionError::Seed {
                        condition: "F4",
                        detail: format!("F minus edge {} still arrows H", g.0),
                    });
                }
                ExtendVerdict::Extendable => self.witnesses_g.push(r.witness.expect("extendable has a witness")),
            }
        }
        self.flags.f4 = Some(true);

        // c_{1,j} must extend to F - {e, g_j} and must not extend to F - e
        let inner = self.inner_edges();
        self.c1_checks.clear();
        for (g, w) in self.edges_at_v().into_iter().zip(&self.witnesses_g) {
            let fixed: Vec<(EdgeId, u8)> = inner.iter().map(|&x| (x, w.get(x).unwrap())).collect();
            let with_g = solve(&[self.e, g], &fixed).verdict;
            let without = solve(&[self.e], &fixed).verdict;
            if with_g == ExtendVerdict::Unknown || without == ExtendVerdict::Unknown {
                return Err(unknown("c_1 extension checks"));
            }
            self.c1_checks.push((with_g == ExtendVerdict::Extendable, without == ExtendVerdict::Extendable));
        }
        if let Some(j) = self.c1_checks.iter().position(|&c| c != (true, false)) {
            return Err(ConstructionError::Seed {
                condition: "F1-F4",
                detail: format!("restricted coloring {j} has extension pattern {:?}", self.c1_checks[j]),
            });
        }
        Ok(())
    }

    pub fn verified(&self) -> bool {
        self.flags == SeedFlags { f1: Some(true), f2: Some(true), f3: Some(true), f4: Some(true) }
    }

    /// Edges of `F′ = F − v − e`, in `F` numbering.
    fn inner_edges(&self) -> Vec<EdgeId> {
        self.graph
            .edge_ids()
            .filter(|&x| {
                let (a, b) = self.graph.endpoints(x);
                x != self.e && a != self.v && b != self.v
            })
            .collect()
    }

    /// `F′` with `v` removed (later vertices shift down), its edge order
    /// following [`Self::inner_edges`], plus `N(v)` in `F′` numbering and
    /// the restricted colorings.
    pub fn base_block(&self) -> Result<BaseBlock, ConstructionError> {
        if !self.verified() || self.witness_e.is_none() {
            return Err(ConstructionError::Precondition("seed must be verified first".into()));
        }
        let shift = |x: Vertex| if x > self.v { x - 1 } else { x };
        let inner = self.inner_edges();
        let edges: Vec<(Vertex, Vertex)> = inner
            .iter()
            .map(|&x| {
                let (a, b) = self.graph.endpoints(x);
                (shift(a), shift(b))
            })
            .collect();
        let graph = Graph::from_edges(self.graph.n() - 1, &edges)?;
        let w = self.graph.neighbors(self.v).iter().map(|&x| shift(x)).collect();
        let forcing = self.witnesses_g.iter().map(|c| restrict(c, &inner)).collect();
        let relaxed = restrict(self.witness_e.as_ref().unwrap(), &inner);
        Ok(BaseBlock { graph, w, forcing, relaxed })
    }
}

/// Construction for a 3-connected `H` (or a triangle) from a verified seed:
/// `k` vertices of degree `d_F(v)`.
pub fn build_3connected_abundant(
    seed: &ThreeConnectedSeed,
    k: usize,
    provider: &dyn SenderProvider,
) -> Result<AbundanceRecipe, ConstructionError> {
    let block = seed.base_block()?;
    let h = &seed.target;
    let (gadget, mut b) = assemble(h, &block, seed.q, k, provider)?;
    let nb = block.graph.n() as Vertex;
    let mut special = Vec::new();
    for i in 0..k as Vertex {
        let v = b.add_vertex(Some(format!("v{i}")))?;
        for &w in &block.w {
            b.add_edge(v, w + i * nb)?;
        }
        special.push(v);
    }
    let (graph, manifest) = b.build_with_manifest();
    let a = Assembled { gadget, graph, manifest };
    let degree = seed.graph.degree(seed.v);
    Ok(finish(RecipeKind::ThreeConnected, h, seed.q, k, block, a, special, degree))
}
