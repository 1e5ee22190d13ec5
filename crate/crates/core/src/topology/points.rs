//! The point set M: minimal non-empty intersections of maximal commuting sets.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{maximal_cliques, sort_family, BitSet, CommutationGraph, Result, TopologyError};

pub const MAX_CLOSURE: usize = 100_000;

/// Two readings of "minimal non-empty intersections".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PointVariant {
    /// Inclusion-minimal members of the intersection closure of the maximal
    /// clique family.
    #[default]
    SubfamilyIntersection,
    /// For each observable, the intersection of every maximal clique
    /// containing it.
    PerObservable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    pub points: Vec<BitSet>,
    /// For each observable, the indices of the points containing it.
    pub membership: Vec<Vec<usize>>,
    pub variant: PointVariant,
}

impl PointSet {
    fn build(points: Vec<BitSet>, observables: usize, variant: PointVariant) -> Self {
        let mut membership = vec![Vec::new(); observables];
        for (i, p) in points.iter().enumerate() {
            for o in p.iter() {
                membership[o].push(i);
            }
        }
        PointSet {
            points,
            membership,
            variant,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether every observable lies in some point.
    pub fn covers_observables(&self) -> bool {
        self.membership.iter().all(|m| !m.is_empty())
    }

    /// Whether no point strictly contains another.
    pub fn is_antichain(&self) -> bool {
        self.points
            .iter()
            .all(|a| self.points.iter().all(|b| !b.is_strict_subset(a)))
    }
}

/// Closes `cliques` under pairwise intersection (dropping empties) and keeps
/// the inclusion-minimal members.
pub fn minimal_intersections(cliques: &[BitSet]) -> Result<Vec<BitSet>> {
    let mut closed: HashSet<BitSet> = cliques.iter().cloned().collect();
    let mut frontier: Vec<BitSet> = cliques.to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in cliques {
                let i = s.intersection(c);
                if !i.is_empty() && !closed.contains(&i) {
                    if closed.len() == MAX_CLOSURE {
                        return Err(TopologyError::ClosureTooLarge { limit: MAX_CLOSURE });
                    }
                    closed.insert(i.clone());
                    next.push(i);
                }
            }
        }
        frontier = next;
    }
    let mut by_size: Vec<BitSet> = closed.into_iter().collect();
    by_size.sort_by_cached_key(|s| (s.len(), s.to_vec()));
    let mut minimal: Vec<BitSet> = Vec::new();
    for s in by_size {
        if !minimal.iter().any(|m| m.is_strict_subset(&s)) {
            minimal.push(s);
        }
    }
    sort_family(&mut minimal);
    Ok(minimal)
}

/// Per-observable intersections of the maximal cliques containing each observable.
pub fn per_observable_intersections(n: usize, cliques: &[BitSet]) -> Vec<BitSet> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for o in 0..n {
        let meet = cliques
            .iter()
            .filter(|c| c.contains(o))
            .fold(BitSet::full(n), |acc, c| acc.intersection(c));
        if seen.insert(meet.clone()) {
            out.push(meet);
        }
    }
    sort_family(&mut out);
    out
}

pub fn points_of_m(g: &CommutationGraph, variant: PointVariant) -> Result<PointSet> {
    let cliques = maximal_cliques(g)?;
    points_from_cliques(g.len(), &cliques, variant)
}

pub fn points_from_cliques(n: usize, cliques: &[BitSet], variant: PointVariant) -> Result<PointSet> {
    let points = match variant {
        PointVariant::SubfamilyIntersection => minimal_intersections(cliques)?,
        PointVariant::PerObservable => per_observable_intersections(n, cliques),
    };
    Ok(PointSet::build(points, n, variant))
}

/// Points `y` all of whose observables commute with all observables of point
/// `index` (including `index` itself, whose observables mutually commute).
pub fn commutant_neighbourhood(g: &CommutationGraph, points: &PointSet, index: usize) -> Result<Vec<usize>> {
    let x = points.points.get(index).ok_or(TopologyError::PointOutOfRange {
        index,
        count: points.len(),
    })?;
    let common = g.common_commutant(x);
    Ok(points
        .points
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_subset(&common))
        .map(|(i, _)| i)
        .collect())
}
