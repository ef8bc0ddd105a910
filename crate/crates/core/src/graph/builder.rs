use std::collections::{HashMap, HashSet};

use super::{key, EdgeId, Graph, GraphError, Vertex};
use crate::manifest::{ConstructionManifest, GadgetPayload, ManifestStep};

/// Mutable graph under construction. Every mutation is recorded in a
/// [`ConstructionManifest`] so the result can be replayed with identical ids.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    nbrs: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
    index: HashMap<(Vertex, Vertex), EdgeId>,
    labels: Vec<Option<String>>,
    label_set: HashSet<String>,
    manifest: ConstructionManifest,
    payload_keys: HashMap<u64, Vec<String>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut b = Self::new();
        b.add_vertices(n);
        b
    }

    /// Starts from a copy of `g`, keeping its vertex and edge ids.
    pub fn from_graph(g: &Graph) -> Self {
        let mut b = Self::new();
        b.attach(g, &[], "").expect("attaching onto an empty builder cannot fail");
        b
    }

    pub fn n(&self) -> usize {
        self.nbrs.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertices(&mut self, count: usize) -> std::ops::Range<Vertex> {
        let start = self.n() as Vertex;
        for _ in 0..count {
            self.nbrs.push(Vec::new());
            self.labels.push(None);
        }
        self.manifest.steps.push(ManifestStep::AddVertices { count });
        start..self.n() as Vertex
    }

    pub fn add_vertex(&mut self, label: Option<String>) -> Result<Vertex, GraphError> {
        if let Some(l) = &label {
            if !self.label_set.insert(l.clone()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let v = self.n() as Vertex;
        self.nbrs.push(Vec::new());
        self.manifest.steps.push(ManifestStep::AddVertex { label: label.clone() });
        self.labels.push(label);
        Ok(v)
    }

    pub fn set_label(&mut self, v: Vertex, label: impl Into<String>) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        let label = label.into();
        if self.labels[v as usize].as_deref() == Some(label.as_str()) {
            return Ok(());
        }
        if !self.label_set.insert(label.clone()) {
            return Err(GraphError::DuplicateLabel(label));
        }
        if let Some(old) = self.labels[v as usize].take() {
            self.label_set.remove(&old);
        }
        self.manifest.steps.push(ManifestStep::SetLabel { vertex: v, label: label.clone() });
        self.labels[v as usize] = Some(label);
        Ok(())
    }

    /// Replaces all labels at once (used when deriving subgraphs). Not recorded.
    pub(crate) fn set_labels(&mut self, labels: Vec<Option<String>>) {
        debug_assert_eq!(labels.len(), self.n());
        self.label_set = labels.iter().flatten().cloned().collect();
        self.labels = labels;
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.get(v as usize).and_then(|l| l.as_deref())
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.n()))
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.index.contains_key(&key(u, v))
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e.index()]
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId, GraphError> {
        self.insert_edge(u, v)?;
        self.manifest.steps.push(ManifestStep::AddEdge { u, v });
        Ok(EdgeId(self.edges.len() as u32 - 1))
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let k = key(u, v);
        if self.index.contains_key(&k) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(k);
        self.index.insert(k, id);
        self.nbrs[u as usize].push(v);
        self.nbrs[v as usize].push(u);
        Ok(id)
    }

    /// Adds a vertex-disjoint copy of `gadget` and identifies the listed gadget
    /// vertices with host vertices. Gadget edges between two identified vertices
    /// must already exist in the host; they are merged, never duplicated.
    ///
    /// Returns the host vertex of every gadget vertex.
    pub fn attach(
        &mut self,
        gadget: &Graph,
        identification: &[(Vertex, Vertex)],
        prefix: &str,
    ) -> Result<Vec<Vertex>, GraphError> {
        let map = self.attach_inner(gadget, identification, prefix)?;
        let key = self.payload_key(gadget);
        self.manifest.steps.push(ManifestStep::Attach {
            gadget: key,
            identification: identification.to_vec(),
            prefix: prefix.to_string(),
        });
        Ok(map)
    }

    fn attach_inner(
        &mut self,
        gadget: &Graph,
        identification: &[(Vertex, Vertex)],
        prefix: &str,
    ) -> Result<Vec<Vertex>, GraphError> {
        let mut map = vec![Vertex::MAX; gadget.n()];
        let mut used: HashMap<Vertex, Vertex> = HashMap::new();
        for &(g, h) in identification {
            if g as usize >= gadget.n() {
                return Err(GraphError::VertexOutOfRange(g, gadget.n()));
            }
            self.check_vertex(h)?;
            if let Some(&other) = used.get(&h) {
                if other != g {
                    return Err(GraphError::CollapsedIdentification(other.min(g), other.max(g), h));
                }
            }
            if map[g as usize] != Vertex::MAX && map[g as usize] != h {
                return Err(GraphError::CollapsedIdentification(g, g, h));
            }
            used.insert(h, g);
            map[g as usize] = h;
        }
        for &(a, b) in gadget.edges() {
            let (ha, hb) = (map[a as usize], map[b as usize]);
            if ha != Vertex::MAX && hb != Vertex::MAX && !self.has_edge(ha, hb) {
                return Err(GraphError::InterfaceNonEdge(a, b, ha, hb));
            }
        }
        let mut new_labels = Vec::new();
        for v in gadget.vertices() {
            if map[v as usize] == Vertex::MAX {
                if let Some(l) = gadget.label(v) {
                    let full = format!("{prefix}{l}");
                    if self.label_set.contains(&full) || new_labels.contains(&full) {
                        return Err(GraphError::DuplicateLabel(full));
                    }
                    new_labels.push(full);
                }
            }
        }
        for v in gadget.vertices() {
            if map[v as usize] == Vertex::MAX {
                let id = self.n() as Vertex;
                self.nbrs.push(Vec::new());
                let label = gadget.label(v).map(|l| format!("{prefix}{l}"));
                if let Some(l) = &label {
                    self.label_set.insert(l.clone());
                }
                self.labels.push(label);
                map[v as usize] = id;
            }
        }
        for &(a, b) in gadget.edges() {
            let (ha, hb) = (map[a as usize], map[b as usize]);
            if !self.has_edge(ha, hb) {
                self.insert_edge(ha, hb)?;
            }
        }
        Ok(map)
    }

    fn payload_key(&mut self, gadget: &Graph) -> String {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        gadget.n().hash(&mut h);
        gadget.edges().hash(&mut h);
        gadget.labels().hash(&mut h);
        let digest = h.finish();
        if let Some(keys) = self.payload_keys.get(&digest) {
            for k in keys {
                let p = &self.manifest.gadgets[k];
                if p.n == gadget.n() && p.edges == gadget.edges() && p.labels == gadget.labels() {
                    return k.clone();
                }
            }
        }
        let k = format!("g{}", self.manifest.gadgets.len());
        self.manifest.gadgets.insert(k.clone(), GadgetPayload::of(gadget));
        self.payload_keys.entry(digest).or_default().push(k.clone());
        k
    }

    pub fn build(self) -> Graph {
        self.build_with_manifest().0
    }

    pub fn build_with_manifest(self) -> (Graph, ConstructionManifest) {
        let mut nbrs = self.nbrs;
        for list in &mut nbrs {
            list.sort_unstable();
        }
        (Graph::from_parts(nbrs, self.edges, self.index, self.labels), self.manifest)
    }

    /// Replays one recorded step. Used by [`ConstructionManifest::replay`].
    pub(crate) fn apply(
        &mut self,
        step: &ManifestStep,
        gadgets: &std::collections::BTreeMap<String, GadgetPayload>,
    ) -> Result<(), crate::manifest::ManifestError> {
        use crate::manifest::ManifestError;
        match step {
            ManifestStep::AddVertices { count } => {
                self.add_vertices(*count);
            }
            ManifestStep::AddVertex { label } => {
                self.add_vertex(label.clone())?;
            }
            ManifestStep::SetLabel { vertex, label } => self.set_label(*vertex, label.clone())?,
            ManifestStep::AddEdge { u, v } => {
                self.add_edge(*u, *v)?;
            }
            ManifestStep::Attach { gadget, identification, prefix } => {
                let payload = gadgets
                    .get(gadget)
                    .ok_or_else(|| ManifestError::UnknownGadget(gadget.clone()))?;
                let g = payload.to_graph()?;
                self.attach(&g, identification, prefix)?;
            }
        }
        Ok(())
    }
}

/// Disjoint union of `host` and `gadget`, then identification of the listed
/// gadget vertices with host vertices.
pub fn compose(
    host: &Graph,
    gadget: &Graph,
    identification: &[(Vertex, Vertex)],
) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::from_graph(host);
    b.attach(gadget, identification, "")?;
    Ok(b.build())
}
