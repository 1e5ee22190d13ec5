//! Inputs shared by the kernel benchmarks.

use qcausal_core::causal::{Event, EventSet};
use qcausal_core::topology::CommutationGraph;

/// `k` events on one time slice, pairwise spacelike and in one group, so
/// every pair is free: `k (k - 1) / 2` pairs.
pub fn spacelike_row(k: usize) -> EventSet {
    let events = (0..k)
        .map(|i| Event::new(&format!("e{i}"), 0.0, &[i as f64], Some("row")))
        .collect();
    EventSet::new(events).expect("distinct ids")
}

/// Cycle on `n` vertices with chords to the vertex three steps ahead.
pub fn chorded_cycle(n: usize) -> CommutationGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((i, (i + 3) % n));
    }
    CommutationGraph::with_edges(n, &edges).expect("valid edges")
}
