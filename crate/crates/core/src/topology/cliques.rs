//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting).

use super::{sort_family, BitSet, CommutationGraph, Result, TopologyError};

pub const MAX_VERTICES: usize = 500;
pub const MAX_CLIQUES: usize = 100_000;

struct Search<'a> {
    neighbours: &'a [BitSet],
    found: Vec<BitSet>,
}

impl Search<'_> {
    fn expand(&mut self, r: BitSet, mut p: BitSet, mut x: BitSet) -> Result<()> {
        if p.is_empty() {
            if x.is_empty() {
                if self.found.len() == MAX_CLIQUES {
                    return Err(TopologyError::TooManyCliques { limit: MAX_CLIQUES });
                }
                self.found.push(r);
            }
            return Ok(());
        }
        // pivot: the candidate with most neighbours left in p
        let pivot = p
            .union(&x)
            .iter()
            .max_by_key(|&u| (p.intersection(&self.neighbours[u]).len(), std::cmp::Reverse(u)))
            .expect("p is non-empty");
        let branch = p.difference(&self.neighbours[pivot]);
        for v in branch.iter() {
            let mut r2 = r.clone();
            r2.insert(v);
            let nv = &self.neighbours[v];
            self.expand(r2, p.intersection(nv), x.intersection(nv))?;
            p.remove(v);
            x.insert(v);
        }
        Ok(())
    }
}

/// All maximal pairwise-commuting sets, sorted by their element lists.
pub fn maximal_cliques(g: &CommutationGraph) -> Result<Vec<BitSet>> {
    let n = g.len();
    if n > MAX_VERTICES {
        return Err(TopologyError::TooManyVertices { vertices: n, limit: MAX_VERTICES });
    }
    let neighbours: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut s = g.neighbourhood(v).clone();
            s.remove(v);
            s
        })
        .collect();
    let mut search = Search {
        neighbours: &neighbours,
        found: Vec::new(),
    };
    search.expand(BitSet::empty(n), BitSet::full(n), BitSet::empty(n))?;
    let mut found = search.found;
    sort_family(&mut found);
    Ok(found)
}
