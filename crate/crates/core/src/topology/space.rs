//! Finite topologies generated from a subbasis.
//!
//! On a finite set the generated topology is determined by the minimal open
//! neighbourhood `U_x` of each point (the intersection of every subbasis
//! member containing `x`); the open sets are exactly the unions of these.
//! The separation flags are read off the `U_x` directly, so they stay exact
//! even when the open-set enumeration is capped.

use std::collections::HashSet;

use super::{sort_family, BitSet, Result, TopologyError};

pub const MAX_OPEN_SETS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteTopology {
    pub point_count: usize,
    pub subbasis: Vec<BitSet>,
    /// Minimal open neighbourhood of each point.
    pub minimal_open: Vec<BitSet>,
    /// Every open set, sorted; partial when `size_cap_hit`.
    pub open_sets: Vec<BitSet>,
    pub size_cap_hit: bool,
    pub is_t0: bool,
    pub is_t1: bool,
    pub points_closed: bool,
}

pub fn generate_topology(
    subbasis: &[BitSet],
    point_count: usize,
    include_point_complements: bool,
) -> Result<FiniteTopology> {
    let mut basis_family: Vec<BitSet> = Vec::with_capacity(subbasis.len() + point_count);
    for s in subbasis {
        if s.universe() != point_count {
            return Err(TopologyError::SubbasisOutOfRange {
                universe: s.universe(),
                points: point_count,
            });
        }
        basis_family.push(s.clone());
    }
    if include_point_complements {
        basis_family.extend((0..point_count).map(|p| BitSet::from_indices(point_count, [p]).complement()));
    }

    let minimal_open: Vec<BitSet> = (0..point_count)
        .map(|x| {
            basis_family
                .iter()
                .filter(|s| s.contains(x))
                .fold(BitSet::full(point_count), |acc, s| acc.intersection(s))
        })
        .collect();

    let (open_sets, size_cap_hit) = enumerate_unions(&minimal_open, point_count);

    let is_t0 = (0..point_count).all(|x| (x + 1..point_count).all(|y| minimal_open[x] != minimal_open[y]));
    let points_closed = minimal_open.iter().all(|u| u.len() == 1);

    Ok(FiniteTopology {
        point_count,
        subbasis: basis_family,
        minimal_open,
        open_sets,
        size_cap_hit,
        is_t0,
        is_t1: points_closed,
        points_closed,
    })
}

fn enumerate_unions(generators: &[BitSet], point_count: usize) -> (Vec<BitSet>, bool) {
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut opens = vec![BitSet::empty(point_count)];
    seen.insert(opens[0].clone());
    let mut distinct: Vec<&BitSet> = Vec::new();
    for g in generators {
        if !distinct.contains(&g) {
            distinct.push(g);
        }
    }
    for g in distinct {
        let current = opens.len();
        for i in 0..current {
            let u = opens[i].union(g);
            if seen.insert(u.clone()) {
                if opens.len() == MAX_OPEN_SETS {
                    sort_family(&mut opens);
                    return (opens, true);
                }
                opens.push(u);
            }
        }
    }
    sort_family(&mut opens);
    (opens, false)
}

impl FiniteTopology {
    pub fn is_discrete(&self) -> bool {
        self.points_closed
    }

    pub fn is_indiscrete(&self) -> bool {
        self.minimal_open.iter().all(|u| u.len() == self.point_count)
    }

    pub fn open_set_count(&self) -> Option<usize> {
        (!self.size_cap_hit).then_some(self.open_sets.len())
    }

    pub fn is_open(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.minimal_open[x].is_subset(set))
    }

    /// `x ≤ y` iff every open set containing `x` contains `y`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.minimal_open[x].contains(y)
    }

    /// Number of points in the longest strictly increasing chain of the
    /// specialization preorder (equivalent points count once).
    pub fn longest_chain(&self) -> usize {
        let n = self.point_count;
        let strict = |x: usize, y: usize| self.specializes(x, y) && !self.specializes(y, x);
        // minimal_open[x] ⊇ minimal_open[y] whenever x ≤ y, so ordering by
        // descending neighbourhood size is a linear extension
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.minimal_open[x].len()));
        let mut best = vec![1usize; n];
        for (i, &y) in order.iter().enumerate() {
            for &x in &order[..i] {
                if strict(x, y) {
                    best[y] = best[y].max(best[x] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Exhaustive pairwise union and intersection closure check.
    pub fn is_closed_family(&self) -> bool {
        let set: HashSet<&BitSet> = self.open_sets.iter().collect();
        let n = self.point_count;
        set.contains(&BitSet::empty(n))
            && set.contains(&BitSet::full(n))
            && self.open_sets.iter().all(|a| {
                self.open_sets
                    .iter()
                    .all(|b| set.contains(&a.union(b)) && set.contains(&a.intersection(b)))
            })
    }
}
