//! Replayable construction recipes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError, Vertex};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest references unknown gadget {0:?}")]
    UnknownGadget(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("manifest json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ManifestStep {
    AddVertices { count: usize },
    AddVertex { label: Option<String> },
    SetLabel { vertex: Vertex, label: String },
    AddEdge { u: Vertex, v: Vertex },
    Attach { gadget: String, identification: Vec<(Vertex, Vertex)>, prefix: String },
}

/// A gadget graph stored with its exact edge order so replay reproduces ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetPayload {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    pub labels: Vec<Option<String>>,
}

impl GadgetPayload {
    pub fn of(g: &Graph) -> Self {
        GadgetPayload { n: g.n(), edges: g.edges().to_vec(), labels: g.labels().to_vec() }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::with_vertices(self.n);
        for (v, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                b.set_label(v as Vertex, l.clone())?;
            }
        }
        for &(u, v) in &self.edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }
}

/// Every step a [`GraphBuilder`] performed, plus the gadget graphs it attached.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionManifest {
    pub steps: Vec<ManifestStep>,
    pub gadgets: BTreeMap<String, GadgetPayload>,
    /// Free-form named anchors (vertices, edges) the builder chose to expose.
    #[serde(default)]
    pub anchors: BTreeMap<String, Vec<u32>>,
}

impl ConstructionManifest {
    pub fn replay(&self) -> Result<Graph, ManifestError> {
        let mut b = GraphBuilder::new();
        for step in &self.steps {
            b.apply(step, &self.gadgets)?;
        }
        Ok(b.build())
    }

    pub fn to_json(&self) -> Result<String, ManifestError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, ManifestError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn replay_reproduces_ids_and_labels() {
        let mut b = GraphBuilder::new();
        let a = b.add_vertex(Some("a".into())).unwrap();
        let c = b.add_vertex(None).unwrap();
        b.add_edge(a, c).unwrap();
        let k4 = families::complete(4);
        b.attach(&k4, &[(0, a), (1, c)], "k.").unwrap();
        b.attach(&k4, &[(2, a)], "k2.").unwrap();
        let (g, manifest) = b.build_with_manifest();
        assert_eq!(manifest.gadgets.len(), 1);
        let json = manifest.to_json().unwrap();
        let back = ConstructionManifest::from_json(&json).unwrap().replay().unwrap();
        assert_eq!(back, g);
        assert_eq!(back.labels(), g.labels());
    }
}
