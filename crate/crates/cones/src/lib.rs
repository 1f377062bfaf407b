//! Cone graphs `C_i^X`: the relator cycle `C_i` with a chord for every sub-arc
//! whose label lies in `X_i`, for symbolic generating sets `X`.

mod export;
mod graph;
mod hyperbolic;
mod jumps;
mod spec;

pub use export::{export_graph, import_edge_list, ExportFormat};
pub use graph::{build_cone, cone_diameter, cone_distance, ChordTag, ConeGraph, DENSE_LIMIT, INF};
pub use hyperbolic::{cycle_delta4_twice, cycle_slim, hyperbolicity, HyperbolicityReport, Method, EXHAUSTIVE_LIMIT};
pub use jumps::IntervalJumps;
pub use spec::{GenSetSpec, Rule};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("spec parse error at line {line}: {reason}")]
    SpecParse { line: usize, reason: String },
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("edge list error at line {line}: {reason}")]
    Import { line: usize, reason: String },
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("no exact method for this {n}-vertex graph")]
    TooLarge { n: usize },
}
