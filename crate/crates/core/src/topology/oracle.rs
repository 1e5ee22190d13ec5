//! Brute-force reference for the point set on small graphs (≤ 32 vertices).
//!
//! Works on plain `u32` vertex masks and enumerates subsets directly, sharing
//! nothing with the clique search or closure iteration it is compared to.

use super::{BitSet, CommutationGraph};

/// Largest clique family for which all 2^k subfamilies are enumerated literally.
pub const LITERAL_LIMIT: usize = 22;

/// Largest graph the subset enumeration accepts.
pub const MAX_ORACLE_VERTICES: usize = 20;

fn masks(g: &CommutationGraph) -> Vec<u32> {
    assert!(g.len() <= 32, "oracle handles at most 32 vertices");
    (0..g.len())
        .map(|v| g.neighbourhood(v).iter().fold(0u32, |m, u| m | 1 << u))
        .collect()
}

fn is_clique(adj: &[u32], set: u32) -> bool {
    (0..adj.len()).all(|v| set >> v & 1 == 0 || set & !adj[v] == 0)
}

/// Maximal cliques by checking every vertex subset.
pub fn maximal_cliques_by_subsets(g: &CommutationGraph) -> Vec<u32> {
    let adj = masks(g);
    let n = adj.len();
    assert!(n <= MAX_ORACLE_VERTICES, "subset enumeration is limited to {MAX_ORACLE_VERTICES} vertices");
    let mut out = Vec::new();
    for set in 1u32..(1u32 << n) {
        if !is_clique(&adj, set) {
            continue;
        }
        let extendable = (0..n).any(|v| set >> v & 1 == 0 && is_clique(&adj, set | 1 << v));
        if !extendable {
            out.push(set);
        }
    }
    out
}

/// Every non-empty intersection of a non-empty subfamily of `cliques`,
/// enumerating all 2^k subfamilies.
pub fn subfamily_intersections(cliques: &[u32], all: u32) -> Vec<u32> {
    let k = cliques.len();
    assert!(k <= LITERAL_LIMIT);
    let mut meet = vec![all; 1 << k];
    let mut out = Vec::new();
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        meet[mask] = meet[mask & (mask - 1)] & cliques[low];
        if meet[mask] != 0 {
            out.push(meet[mask]);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Same family via vertex subsets: S is a subfamily intersection exactly when
/// it equals the intersection of all cliques containing it.
pub fn galois_closed_sets(cliques: &[u32], n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for s in 1u32..(1u32 << n) {
        let mut meet = u32::MAX;
        let mut any = false;
        for &c in cliques {
            if c & s == s {
                meet &= c;
                any = true;
            }
        }
        if any && meet == s {
            out.push(s);
        }
    }
    out
}

fn minimal(family: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = family
        .iter()
        .copied()
        .filter(|&s| !family.iter().any(|&o| o != s && o & s == o))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Minimal non-empty subfamily intersections of the maximal cliques of `g`.
pub fn brute_force_points(g: &CommutationGraph) -> Vec<BitSet> {
    let n = g.len();
    let cliques = maximal_cliques_by_subsets(g);
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let family = if cliques.len() <= LITERAL_LIMIT {
        subfamily_intersections(&cliques, all)
    } else {
        galois_closed_sets(&cliques, n)
    };
    let mut points: Vec<BitSet> = minimal(&family)
        .into_iter()
        .map(|m| BitSet::from_indices(n, (0..n).filter(|&v| m >> v & 1 == 1)))
        .collect();
    super::sort_family(&mut points);
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_routes_agree_on_small_graphs() {
        let g = CommutationGraph::with_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let cliques = maximal_cliques_by_subsets(&g);
        let lit = subfamily_intersections(&cliques, 0b111111);
        let gal = galois_closed_sets(&cliques, 6);
        assert_eq!(lit, gal);
    }

    #[test]
    fn shared_vertex_fixture() {
        let g = CommutationGraph::with_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let pts: Vec<Vec<usize>> = brute_force_points(&g).iter().map(|p| p.to_vec()).collect();
        assert_eq!(pts, vec![vec![2]]);
    }
}
