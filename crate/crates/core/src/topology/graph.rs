use std::collections::{BTreeSet, HashMap};

use super::{BitSet, Result, TopologyError};

/// Symmetric, reflexive commutation relation over labelled observables.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutationGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<BitSet>,
}

impl CommutationGraph {
    /// Graph with the given vertices, each commuting only with itself.
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(TopologyError::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(TopologyError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let adjacency = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        Ok(CommutationGraph {
            labels,
            index,
            adjacency,
        })
    }

    /// Convenience constructor over vertices `0..n` labelled by their index.
    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = CommutationGraph::new((0..n).map(|i| i.to_string()).collect())?;
        for &(a, b) in edges {
            g.add_edge_index(a, b);
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn add_edge_index(&mut self, a: usize, b: usize) {
        self.adjacency[a].insert(b);
        self.adjacency[b].insert(a);
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<()> {
        let ia = self.index_of(a).ok_or_else(|| TopologyError::UnknownLabel(a.to_string()))?;
        let ib = self.index_of(b).ok_or_else(|| TopologyError::UnknownLabel(b.to_string()))?;
        self.add_edge_index(ia, ib);
        Ok(())
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    /// Everything commuting with `a`, including `a`.
    pub fn neighbourhood(&self, a: usize) -> &BitSet {
        &self.adjacency[a]
    }

    /// Vertices commuting with every member of `set`.
    pub fn common_commutant(&self, set: &BitSet) -> BitSet {
        set.iter()
            .fold(BitSet::full(self.len()), |acc, v| acc.intersection(&self.adjacency[v]))
    }

    pub fn is_clique(&self, set: &BitSet) -> bool {
        set.is_subset(&self.common_commutant(set))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| self.adjacency[i].iter().filter(|&j| j > i).count()).sum()
    }

    /// Parses the edge-list format: one `a b` pair per line, a lone label
    /// declares an isolated observable, blank lines and `#` comments are
    /// skipped. Vertices are ordered by sorted label.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut labels = BTreeSet::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [a] => {
                    labels.insert(a.to_string());
                }
                [a, b] => {
                    labels.insert(a.to_string());
                    labels.insert(b.to_string());
                    edges.push((a.to_string(), b.to_string()));
                }
                _ => {
                    return Err(TopologyError::Parse {
                        line: lineno + 1,
                        message: format!("expected one or two labels, found {}", tokens.len()),
                    })
                }
            }
        }
        let mut g = CommutationGraph::new(labels.into_iter().collect())?;
        for (a, b) in edges {
            g.add_edge(&a, &b)?;
        }
        Ok(g)
    }

    /// Inverse of [`CommutationGraph::from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            let mut any = false;
            for j in self.adjacency[i].iter().filter(|&j| j > i) {
                out.push_str(&format!("{} {}\n", self.labels[i], self.labels[j]));
                any = true;
            }
            let earlier = self.adjacency[i].iter().any(|j| j < i);
            if !any && !earlier {
                out.push_str(&format!("{}\n", self.labels[i]));
            }
        }
        out
    }

    /// `k` groups of `size` observables; each group commutes only internally.
    pub fn disjoint_cliques(k: usize, size: usize) -> Result<Self> {
        let labels = (0..k).flat_map(|g| (0..size).map(move |i| format!("t{g}o{i}"))).collect();
        let mut g = CommutationGraph::new(labels)?;
        for grp in 0..k {
            for a in 0..size {
                for b in a + 1..size {
                    g.add_edge_index(grp * size + a, grp * size + b);
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = CommutationGraph::with_edges(n, &[])?;
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge_index(a, b);
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_lists() {
        let text = "# two triangles sharing v\na b\nb v\na v\n\nc d\nd v\nc v\nlonely\n";
        let g = CommutationGraph::from_edge_list(text).unwrap();
        assert_eq!(g.labels(), &["a", "b", "c", "d", "lonely", "v"]);
        assert_eq!(g.edge_count(), 6);
        let v = g.index_of("v").unwrap();
        assert!(g.commutes(v, g.index_of("a").unwrap()));
        assert!(!g.commutes(g.index_of("a").unwrap(), g.index_of("c").unwrap()));
        assert!(g.commutes(v, v));
        let again = CommutationGraph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            CommutationGraph::from_edge_list("a b c"),
            Err(TopologyError::Parse { line: 1, .. })
        ));
        assert_eq!(CommutationGraph::from_edge_list("# nothing\n"), Err(TopologyError::EmptyGraph));
        assert!(matches!(
            CommutationGraph::new(vec!["a".into(), "a".into()]),
            Err(TopologyError::DuplicateLabel(_))
        ));
        let mut g = CommutationGraph::with_edges(2, &[]).unwrap();
        assert!(matches!(g.add_edge("0", "9"), Err(TopologyError::UnknownLabel(_))));
    }
}
