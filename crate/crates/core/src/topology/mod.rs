//! Commutant topology: maximal commuting sets, the point set they induce,
//! commutant neighbourhoods and the finite topology those generate.

mod bitset;
mod cliques;
mod graph;
pub mod oracle;
mod points;
mod report;
mod space;

use thiserror::Error;

pub use bitset::{sort_family, BitSet};
pub use cliques::{maximal_cliques, MAX_CLIQUES, MAX_VERTICES};
pub use graph::CommutationGraph;
pub use points::{
    commutant_neighbourhood, minimal_intersections, per_observable_intersections, points_from_cliques, points_of_m,
    PointSet, PointVariant, MAX_CLOSURE,
};
pub use report::{point_graph, topology_report, ReportOptions, TopologyFlags, TopologyReport};
pub use space::{generate_topology, FiniteTopology, MAX_OPEN_SETS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("graph has no observables")]
    EmptyGraph,
    #[error("duplicate observable label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown observable label {0:?}")]
    UnknownLabel(String),
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has {vertices} vertices; clique enumeration is limited to {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
    #[error("more than {limit} maximal cliques")]
    TooManyCliques { limit: usize },
    #[error("intersection closure exceeds {limit} sets")]
    ClosureTooLarge { limit: usize },
    #[error("point index {index} out of range for {count} points")]
    PointOutOfRange { index: usize, count: usize },
    #[error("subbasis member over {universe} points used for a {points}-point space")]
    SubbasisOutOfRange { universe: usize, points: usize },
}

impl TopologyError {
    /// Whether this error reports an exhausted size cap rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            TopologyError::TooManyVertices { .. } | TopologyError::TooManyCliques { .. } | TopologyError::ClosureTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, TopologyError>;
