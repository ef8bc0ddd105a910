//! Construction and exhaustive verification of Ramsey gadget graphs.

pub mod arrowing;
pub mod constructions;
pub mod gadgets;
pub mod graph;
pub mod manifest;

pub use graph::{EdgeId, Graph, GraphBuilder, GraphError, Vertex};
