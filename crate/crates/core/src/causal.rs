//! Classical light-cone order on measurement events, enforcement edges
//! between entangled measurements, and the quantum causal order they induce.
//!
//! The direction of enforcement between spacelike-separated measurements is
//! not fixed by the model, so the central entry point,
//! [`enumerate_admissible_orientations`], quantifies over every orientation
//! and keeps the acyclic ones.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

/// Slack on the invariant interval when deciding timelike or lightlike separation.
pub const INTERVAL_TOL: f64 = 1e-9;
pub const MAX_FREE_PAIRS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CausalError {
    #[error("duplicate event id {0:?}")]
    DuplicateId(String),
    #[error("unknown event id {0:?}")]
    UnknownId(String),
    #[error("event {id:?} has {found} spatial coordinates, expected {expected}")]
    DimensionMismatch { id: String, expected: usize, found: usize },
    #[error("event {0:?} has a non-finite coordinate")]
    NonFinite(String),
    #[error("orientation does not direct same-group pair ({0}, {1})")]
    MissingPair(String, String),
    #[error("orientation directs {from} -> {to}, contradicting the classical order")]
    ContradictsClassical { from: String, to: String },
    #[error("orientation directs ({0}, {1}), which are not in the same entanglement group")]
    NotAGroupPair(String, String),
    #[error("inadmissible orientation: causal cycle {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("{found} free pairs exceed the enumeration limit of {limit}")]
    TooManyFreePairs { found: usize, limit: usize },
    #[error("orders are over different event sets")]
    EventSetMismatch,
    #[error("boost velocity must satisfy |beta| < 1, got {0}")]
    InvalidBoost(f64),
}

pub type Result<T> = std::result::Result<T, CausalError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub id: String,
    pub t: f64,
    pub x: Vec<f64>,
    pub group: Option<String>,
}

impl Event {
    pub fn new(id: &str, t: f64, x: &[f64], group: Option<&str>) -> Self {
        Event {
            id: id.to_string(),
            t,
            x: x.to_vec(),
            group: group.map(str::to_string),
        }
    }
}

/// Events with unique ids and a common spatial dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct EventSet {
    events: Vec<Event>,
}

impl EventSet {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        let mut seen = HashSet::new();
        let dim = events.first().map_or(0, |e| e.x.len());
        for e in &events {
            if !seen.insert(e.id.as_str()) {
                return Err(CausalError::DuplicateId(e.id.clone()));
            }
            if e.x.len() != dim {
                return Err(CausalError::DimensionMismatch {
                    id: e.id.clone(),
                    expected: dim,
                    found: e.x.len(),
                });
            }
            if !e.t.is_finite() || e.x.iter().any(|c| !c.is_finite()) {
                return Err(CausalError::NonFinite(e.id.clone()));
            }
        }
        Ok(EventSet { events })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.events.iter().map(|e| e.id.clone()).collect()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.events
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| CausalError::UnknownId(id.to_string()))
    }

    /// Unordered pairs `(i, j)`, `i < j`, sharing an entanglement group.
    pub fn same_group_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if let (Some(a), Some(b)) = (&self.events[i].group, &self.events[j].group) {
                    if a == b {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }

    /// Three measurements of one entangled triple: the second and third lie
    /// on the same side, the third in the timelike future of the second, and
    /// both spacelike to the first.
    pub fn three_particle_fixture() -> Self {
        EventSet::new(vec![
            Event::new("e1", 1.0, &[-0.99], Some("ghz")),
            Event::new("e2", 1.0, &[0.99], Some("ghz")),
            Event::new("e3", 1.5, &[1.2], Some("ghz")),
        ])
        .expect("fixture is valid")
    }
}

/// Squared invariant interval (t² - |x|²) between two events.
pub fn interval(e: &Event, f: &Event) -> f64 {
    let dt = f.t - e.t;
    let dx2: f64 = e.x.iter().zip(&f.x).map(|(a, b)| (b - a) * (b - a)).sum();
    dt * dt - dx2
}

/// `f` lies in the closed future light cone of `e`.
pub fn classically_precedes(e: &Event, f: &Event) -> bool {
    f.t > e.t && interval(e, f) >= -INTERVAL_TOL
}

/// Strict order as a reachability matrix over an event set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalOrder {
    ids: Vec<String>,
    relation: Vec<bool>,
}

impl CausalOrder {
    fn empty(ids: Vec<String>) -> Self {
        let n = ids.len();
        CausalOrder {
            ids,
            relation: vec![false; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.relation[a * self.len() + b]
    }

    pub fn precedes_id(&self, a: &str, b: &str) -> bool {
        match (self.pos(a), self.pos(b)) {
            (Some(i), Some(j)) => self.precedes(i, j),
            _ => false,
        }
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.precedes(a, b) || self.precedes(b, a)
    }

    fn pos(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    fn set(&mut self, a: usize, b: usize) {
        let n = self.len();
        self.relation[a * n + b] = true;
    }

    pub fn pair_count(&self) -> usize {
        self.relation.iter().filter(|&&r| r).count()
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.len()).all(|i| !self.precedes(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| !self.precedes(a, b) || (0..n).all(|c| !self.precedes(b, c) || self.precedes(a, c)))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| !(self.precedes(a, b) && self.precedes(b, a))))
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_irreflexive() && self.is_transitive() && self.is_antisymmetric()
    }

    /// Whether every pair ordered in `other` is ordered the same way here.
    pub fn contains(&self, other: &CausalOrder) -> bool {
        self.ids == other.ids && self.relation.iter().zip(&other.relation).all(|(s, o)| *s || !*o)
    }

    /// Covering relations (transitive reduction), as id pairs sorted by id.
    pub fn hasse_edges(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.precedes(a, b) && !(0..n).any(|c| self.precedes(a, c) && self.precedes(c, b)) {
                    out.push((self.ids[a].clone(), self.ids[b].clone()));
                }
            }
        }
        out.sort();
        out
    }

    pub fn hasse_text(&self) -> String {
        self.hasse_edges()
            .into_iter()
            .map(|(a, b)| format!("{a} -> {b}\n"))
            .collect()
    }

    /// `{"ids": [...], "adjacency": {id: [successors]}}` with sorted ids.
    pub fn to_json(&self) -> Value {
        let mut ids = self.ids.clone();
        ids.sort();
        let mut adjacency = BTreeMap::new();
        for (a, id) in self.ids.iter().enumerate() {
            let mut succ: Vec<&str> = (0..self.len())
                .filter(|&b| self.precedes(a, b))
                .map(|b| self.ids[b].as_str())
                .collect();
            succ.sort();
            adjacency.insert(id.clone(), succ);
        }
        json!({ "ids": ids, "adjacency": adjacency })
    }
}

pub fn classical_order(events: &EventSet) -> CausalOrder {
    let mut order = CausalOrder::empty(events.ids());
    for (i, e) in events.events.iter().enumerate() {
        for (j, f) in events.events.iter().enumerate() {
            if i != j && classically_precedes(e, f) {
                order.set(i, j);
            }
        }
    }
    order
}

/// Direction chosen for each same-group pair, keyed by `(min, max)` index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    directions: BTreeMap<(usize, usize), (usize, usize)>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn direct(&mut self, from: usize, to: usize) {
        self.directions.insert((from.min(to), from.max(to)), (from, to));
    }

    /// Orientation from `(from, to)` id pairs.
    pub fn from_ids(events: &EventSet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut o = Orientation::new();
        for (a, b) in pairs {
            o.direct(events.index_of(a)?, events.index_of(b)?);
        }
        Ok(o)
    }

    pub fn direction(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        self.directions.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// Same-group pairs that the classical order leaves unordered.
pub fn free_pairs(events: &EventSet, classical: &CausalOrder) -> Vec<(usize, usize)> {
    events
        .same_group_pairs()
        .into_iter()
        .filter(|&(a, b)| !classical.comparable(a, b))
        .collect()
}

/// One directed edge per same-group pair: the classical direction when the
/// pair is timelike or lightlike, otherwise the orientation's choice.
pub fn enforcement_edges(events: &EventSet, orientation: &Orientation) -> Result<Vec<(usize, usize)>> {
    let classical = classical_order(events);
    enforcement_edges_with(events, &classical, orientation)
}

fn enforcement_edges_with(
    events: &EventSet,
    classical: &CausalOrder,
    orientation: &Orientation,
) -> Result<Vec<(usize, usize)>> {
    let pairs = events.same_group_pairs();
    let id = |i: usize| events.events[i].id.clone();
    for &(a, b) in orientation.directions.keys() {
        if !pairs.contains(&(a, b)) {
            return Err(CausalError::NotAGroupPair(id(a), id(b)));
        }
    }
    let mut edges = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let classical_dir = if classical.precedes(a, b) {
            Some((a, b))
        } else if classical.precedes(b, a) {
            Some((b, a))
        } else {
            None
        };
        let chosen = orientation.direction(a, b);
        let edge = match (classical_dir, chosen) {
            (Some(c), Some(o)) if c != o => {
                return Err(CausalError::ContradictsClassical { from: id(o.0), to: id(o.1) })
            }
            (Some(c), _) => c,
            (None, Some(o)) => o,
            (None, None) => return Err(CausalError::MissingPair(id(a), id(b))),
        };
        edges.push(edge);
    }
    Ok(edges)
}

/// Transitive closure of the classical order together with the enforcement
/// edges. A closure that orders some event before itself means the
/// orientation is inadmissible; the error names one such cycle.
pub fn quantum_order(events: &EventSet, orientation: &Orientation) -> Result<CausalOrder> {
    let classical = classical_order(events);
    quantum_order_with(events, &classical, orientation)
}

fn quantum_order_with(events: &EventSet, classical: &CausalOrder, orientation: &Orientation) -> Result<CausalOrder> {
    let edges = enforcement_edges_with(events, classical, orientation)?;
    let n = events.len();
    let mut order = classical.clone();
    for &(a, b) in &edges {
        order.set(a, b);
    }
    let direct = order.clone();
    for k in 0..n {
        for i in 0..n {
            if order.precedes(i, k) {
                for j in 0..n {
                    if order.precedes(k, j) {
                        order.set(i, j);
                    }
                }
            }
        }
    }
    if let Some(start) = (0..n).find(|&i| order.precedes(i, i)) {
        return Err(CausalError::Cycle(witness_cycle(&direct, start)));
    }
    Ok(order)
}

/// Shortest path from `start` back to itself in the direct-edge relation.
#[allow(clippy::needless_range_loop)]
fn witness_cycle(direct: &CausalOrder, start: usize) -> Vec<String> {
    let n = direct.len();
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for b in 0..n {
        if direct.precedes(start, b) && parent[b] == usize::MAX {
            parent[b] = start;
            queue.push_back(b);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == start {
            break;
        }
        for b in 0..n {
            if direct.precedes(v, b) && parent[b] == usize::MAX {
                parent[b] = v;
                queue.push_back(b);
            }
        }
    }
    let mut path = vec![start];
    let mut cur = parent[start];
    while cur != start {
        path.push(cur);
        cur = parent[cur];
    }
    path.push(start);
    path.reverse();
    path.into_iter().map(|i| direct.ids[i].clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Comparability {
    /// Comparable in every admissible quantum order.
    All,
    Some,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairComparability {
    pub a: String,
    pub b: String,
    pub classically_ordered: bool,
    pub status: Comparability,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrientationSummary {
    pub free_pairs: Vec<(String, String)>,
    pub total: usize,
    pub admissible: usize,
    pub pairs: Vec<PairComparability>,
    pub classical: CausalOrder,
    /// Admissible quantum orders in orientation-index order.
    pub admissible_orders: Vec<CausalOrder>,
}

impl OrientationSummary {
    /// Pairs unordered classically yet comparable in every admissible order.
    pub fn strengthened_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .filter(|p| !p.classically_ordered && p.status == Comparability::All)
            .map(|p| (p.a.clone(), p.b.clone()))
            .collect()
    }

    pub fn status(&self, a: &str, b: &str) -> Option<Comparability> {
        self.pairs
            .iter()
            .find(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
            .map(|p| p.status)
    }
}

/// Tries all 2^k orientations of the k free pairs and classifies every
/// event pair by how often it is comparable across the admissible orders.
pub fn enumerate_admissible_orientations(events: &EventSet) -> Result<OrientationSummary> {
    let classical = classical_order(events);
    let free = free_pairs(events, &classical);
    if free.len() > MAX_FREE_PAIRS {
        return Err(CausalError::TooManyFreePairs {
            found: free.len(),
            limit: MAX_FREE_PAIRS,
        });
    }
    let total = 1usize << free.len();
    let outcomes: Vec<Option<CausalOrder>> = (0..total)
        .into_par_iter()
        .map(|mask| {
            let mut o = Orientation::new();
            for (bit, &(a, b)) in free.iter().enumerate() {
                if mask >> bit & 1 == 0 {
                    o.direct(a, b);
                } else {
                    o.direct(b, a);
                }
            }
            match quantum_order_with(events, &classical, &o) {
                Ok(order) => Ok(Some(order)),
                Err(CausalError::Cycle(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let admissible_orders: Vec<CausalOrder> = outcomes.into_iter().flatten().collect();

    let n = events.len();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let hits = admissible_orders.iter().filter(|o| o.comparable(a, b)).count();
            let status = if admissible_orders.is_empty() || hits == 0 {
                Comparability::None
            } else if hits == admissible_orders.len() {
                Comparability::All
            } else {
                Comparability::Some
            };
            pairs.push(PairComparability {
                a: events.events[a].id.clone(),
                b: events.events[b].id.clone(),
                classically_ordered: classical.comparable(a, b),
                status,
            });
        }
    }
    let id = |i: usize| events.events[i].id.clone();
    Ok(OrientationSummary {
        free_pairs: free.iter().map(|&(a, b)| (id(a), id(b))).collect(),
        total,
        admissible: admissible_orders.len(),
        pairs,
        classical,
        admissible_orders,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtensionVerdict {
    pub holds: bool,
    /// A pair ordered by the quantum order but not classically.
    pub witness: Option<(String, String)>,
    /// A classically ordered pair missing from the quantum order.
    pub containment_violation: Option<(String, String)>,
}

/// Holds iff `quantum` contains `classical` and orders at least one more pair.
pub fn strict_extension_check(classical: &CausalOrder, quantum: &CausalOrder) -> Result<ExtensionVerdict> {
    if classical.ids != quantum.ids {
        return Err(CausalError::EventSetMismatch);
    }
    let n = classical.len();
    let mut witness = None;
    let mut containment_violation = None;
    for a in 0..n {
        for b in 0..n {
            let (c, q) = (classical.precedes(a, b), quantum.precedes(a, b));
            let pair = || (classical.ids[a].clone(), classical.ids[b].clone());
            if c && !q && containment_violation.is_none() {
                containment_violation = Some(pair());
            }
            if q && !c && witness.is_none() {
                witness = Some(pair());
            }
        }
    }
    Ok(ExtensionVerdict {
        holds: containment_violation.is_none() && witness.is_some(),
        witness,
        containment_violation,
    })
}

/// Lorentz boost with velocity `beta` along the first spatial axis (c = 1).
pub fn boost(events: &EventSet, beta: f64) -> Result<EventSet> {
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(CausalError::InvalidBoost(beta));
    }
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let boosted = events
        .events
        .iter()
        .map(|e| {
            let mut f = e.clone();
            if let Some(x0) = e.x.first() {
                f.t = gamma * (e.t - beta * x0);
                f.x[0] = gamma * (x0 - beta * e.t);
            }
            f
        })
        .collect();
    EventSet::new(boosted)
}

/// Orients each free pair from the event with the smaller coordinate time in
/// this frame; simultaneous pairs are branched over both directions.
pub fn earliest_first_orientations(events: &EventSet) -> Vec<Orientation> {
    let classical = classical_order(events);
    let mut out = vec![Orientation::new()];
    for (a, b) in free_pairs(events, &classical) {
        let (ta, tb) = (events.events[a].t, events.events[b].t);
        if ta < tb {
            out.iter_mut().for_each(|o| o.direct(a, b));
        } else if tb < ta {
            out.iter_mut().for_each(|o| o.direct(b, a));
        } else {
            let mut flipped = out.clone();
            out.iter_mut().for_each(|o| o.direct(a, b));
            flipped.iter_mut().for_each(|o| o.direct(b, a));
            out.extend(flipped);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(e: (f64, f64), f: (f64, f64)) -> EventSet {
        EventSet::new(vec![Event::new("e", e.0, &[e.1], None), Event::new("f", f.0, &[f.1], None)]).unwrap()
    }

    #[test]
    fn classical_examples() {
        let c = classical_order(&pair((0.0, 0.0), (2.0, 1.0)));
        assert!(c.precedes(0, 1) && !c.precedes(1, 0));
        let c = classical_order(&pair((0.0, 0.0), (1.0, 5.0)));
        assert!(!c.comparable(0, 1));
        let c = classical_order(&pair((0.0, 0.0), (1.0, 1.0)));
        assert!(c.precedes(0, 1), "lightlike separation counts as ordered");
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let e = Event::new("a", 0.0, &[0.0], None);
        assert_eq!(EventSet::new(vec![e.clone(), e]), Err(CausalError::DuplicateId("a".into())));
    }

    #[test]
    fn fixture_geometry() {
        let f3 = EventSet::three_particle_fixture();
        let c = classical_order(&f3);
        assert!(c.precedes_id("e2", "e3"));
        assert!(!c.comparable(0, 1) && !c.comparable(0, 2));
        assert!(c.is_partial_order());
    }

    #[test]
    fn enforcement_edge_rules() {
        let f3 = EventSet::three_particle_fixture();
        let o = Orientation::from_ids(&f3, &[("e1", "e2"), ("e1", "e3")]).unwrap();
        let edges = enforcement_edges(&f3, &o).unwrap();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2)]);

        // a classical pair keeps its direction even if the orientation agrees
        let o = Orientation::from_ids(&f3, &[("e1", "e2"), ("e1", "e3"), ("e2", "e3")]).unwrap();
        assert_eq!(enforcement_edges(&f3, &o).unwrap().len(), 3);

        let bad = Orientation::from_ids(&f3, &[("e1", "e2"), ("e1", "e3"), ("e3", "e2")]).unwrap();
        assert!(matches!(enforcement_edges(&f3, &bad), Err(CausalError::ContradictsClassical { .. })));

        let partial = Orientation::from_ids(&f3, &[("e1", "e2")]).unwrap();
        assert!(matches!(enforcement_edges(&f3, &partial), Err(CausalError::MissingPair(..))));
    }

    #[test]
    fn fixture_quantum_orders() {
        let f3 = EventSet::three_particle_fixture();
        let o = Orientation::from_ids(&f3, &[("e1", "e2"), ("e1", "e3")]).unwrap();
        let q = quantum_order(&f3, &o).unwrap();
        assert!(q.precedes_id("e1", "e3") && q.is_partial_order());

        let o = Orientation::from_ids(&f3, &[("e1", "e2"), ("e3", "e1")]).unwrap();
        match quantum_order(&f3, &o) {
            Err(CausalError::Cycle(c)) => {
                assert_eq!(c.first(), c.last());
                assert_eq!(c.len(), 4);
            }
            other => panic!("expected a cycle, got {other:?}"),
        }

        let o = Orientation::from_ids(&f3, &[("e2", "e1"), ("e3", "e1")]).unwrap();
        let q = quantum_order(&f3, &o).unwrap();
        let c = classical_order(&f3);
        assert!(q.precedes_id("e3", "e1"));
        assert!(q.contains(&c) && q.pair_count() > c.pair_count());
    }

    #[test]
    fn enumeration_on_fixture() {
        let s = enumerate_admissible_orientations(&EventSet::three_particle_fixture()).unwrap();
        assert_eq!((s.total, s.admissible), (4, 3));
        assert_eq!(s.status("e1", "e3"), Some(Comparability::All));
        assert_eq!(s.strengthened_pairs(), vec![("e1".into(), "e2".into()), ("e1".into(), "e3".into())]);
    }

    #[test]
    fn no_free_pairs_means_classical_order() {
        let events = EventSet::new(vec![
            Event::new("a", 0.0, &[0.0], Some("g1")),
            Event::new("b", 2.0, &[0.5], Some("g1")),
            Event::new("c", 0.0, &[9.0], Some("g2")),
            Event::new("d", 3.0, &[9.0], Some("g2")),
        ])
        .unwrap();
        let s = enumerate_admissible_orientations(&events).unwrap();
        assert_eq!((s.total, s.admissible), (1, 1));
        assert_eq!(s.admissible_orders[0], s.classical);

        let loose = EventSet::new(vec![Event::new("a", 0.0, &[0.0], None), Event::new("b", 0.0, &[3.0], None)]).unwrap();
        let s = enumerate_admissible_orientations(&loose).unwrap();
        assert_eq!(s.admissible_orders, vec![classical_order(&loose)]);
    }

    #[test]
    fn extension_verdicts() {
        let f3 = EventSet::three_particle_fixture();
        let c = classical_order(&f3);
        let same = strict_extension_check(&c, &c).unwrap();
        assert!(!same.holds && same.witness.is_none());

        let o = Orientation::from_ids(&f3, &[("e2", "e1"), ("e3", "e1")]).unwrap();
        let q = quantum_order(&f3, &o).unwrap();
        let v = strict_extension_check(&c, &q).unwrap();
        assert!(v.holds);
        let (a, b) = v.witness.unwrap();
        assert!(a == "e1" || b == "e1");

        let empty = CausalOrder::empty(c.ids().to_vec());
        let v = strict_extension_check(&c, &empty).unwrap();
        assert!(!v.holds);
        assert_eq!(v.containment_violation, Some(("e2".into(), "e3".into())));

        let other = classical_order(&pair((0.0, 0.0), (1.0, 0.0)));
        assert_eq!(strict_extension_check(&c, &other), Err(CausalError::EventSetMismatch));
    }

    #[test]
    fn boosts_preserve_the_classical_order() {
        let f3 = EventSet::three_particle_fixture();
        let c = classical_order(&f3);
        for k in -9..=9 {
            let b = boost(&f3, k as f64 / 10.0).unwrap();
            assert_eq!(classical_order(&b), c);
        }
        assert!(boost(&f3, 1.0).is_err());
    }

    #[test]
    fn earliest_first_branches_on_ties() {
        let f3 = EventSet::three_particle_fixture();
        // e1 and e2 are simultaneous in this frame; e1 precedes e3 in time
        let os = earliest_first_orientations(&f3);
        assert_eq!(os.len(), 2);
        for o in &os {
            assert_eq!(o.direction(0, 2), Some((0, 2)));
        }
    }

    #[test]
    fn json_and_hasse_output() {
        let f3 = EventSet::three_particle_fixture();
        let o = Orientation::from_ids(&f3, &[("e1", "e2"), ("e1", "e3")]).unwrap();
        let q = quantum_order(&f3, &o).unwrap();
        assert_eq!(q.hasse_text(), "e1 -> e2\ne2 -> e3\n");
        let v = q.to_json();
        assert_eq!(v["adjacency"]["e1"], json!(["e2", "e3"]));
        assert_eq!(v["ids"], json!(["e1", "e2", "e3"]));
    }
}
