//! Finite-dimensional quantum measurement, Bell-type correlations, lattice
//! field commutators, commutant topologies and causal orders on measurement
//! events, with a scenario runner tying them together.

pub mod acceptance;
pub mod causal;
pub mod entanglement;
pub mod fixtures;
pub mod lattice;
pub mod linalg;
pub mod quantum;
pub mod scenario;
pub mod topology;

pub use causal::{CausalError, CausalOrder, Event, EventSet, Orientation};
pub use entanglement::EntanglementError;
pub use lattice::{LatticeError, LatticeSpec};
pub use linalg::Matrix;
pub use quantum::{Pvm, QuantumError, StateVector, UnitaryOp};
pub use topology::{CommutationGraph, PointVariant, TopologyError};
pub use scenario::{parse_scenario, run_scenario, RunOptions, RunReport, Scenario, ScenarioError, ScenarioKind};

#[cfg(test)]
mod tests;
