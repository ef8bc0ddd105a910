//! Abundance constructions, the clique ladder, and the sender-free results
//! about stars and the path on four vertices.

mod abundance;
mod clique;
mod star;

use thiserror::Error;

use crate::arrowing::ArrowError;
use crate::gadgets::GadgetError;
use crate::graph::pattern::ColoringError;
use crate::graph::{EdgeColoring, EdgeId, Graph, GraphError, Vertex};

pub use abundance::{
    build_3connected_abundant, build_cycle_abundant, build_ktk2_abundant, cycle_block, ktk2_block, AbundanceRecipe,
    RecipeKind, RecipeRecord, SeedFlags, ThreeConnectedSeed,
};
pub use clique::{build_clique_gtilde, clique_ladder, phi_coloring, psi_coloring, CliqueGtilde, CliqueLadder, MAX_LADDER_ORDER};
pub use star::{degree_one_count, p4_abundant, star_arrow_predicate, star_degree_one_count_check, DegreeOneCheck};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("seed condition {condition} fails: {detail}")]
    Seed { condition: &'static str, detail: String },
    #[error("input is not a minimal Ramsey graph: {0}")]
    NotMinimal(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("order {order} exceeds the limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Arrow(#[from] ArrowError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// A block graph with a marked vertex set and its two kinds of base colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseBlock {
    pub graph: Graph,
    /// The interface set `W` inside the block.
    pub w: Vec<Vertex>,
    /// Colorings whose presence on one block forces the special vertex.
    pub forcing: Vec<Vec<u8>>,
    /// Coloring used on every other block.
    pub relaxed: Vec<u8>,
}

/// Colors of `c` on `edges`, as a plain vector.
fn restrict(c: &EdgeColoring, edges: &[EdgeId]) -> Vec<u8> {
    edges.iter().map(|&e| c.get(e).expect("total coloring")).collect()
}
