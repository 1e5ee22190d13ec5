use serde::Serialize;

use super::{
    commutant_neighbourhood, generate_topology, maximal_cliques, points_from_cliques, BitSet, CommutationGraph,
    FiniteTopology, PointSet, PointVariant, Result,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub variant: PointVariant,
    pub include_point_complements: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopologyFlags {
    pub is_t0: bool,
    pub is_t1: bool,
    pub points_closed: bool,
    pub discrete: bool,
    pub size_cap_hit: bool,
    /// Whether every observable lies in some point, per variant.
    pub covers_observables_subfamily: bool,
    pub covers_observables_per_observable: bool,
}

/// Everything derived from one commutation graph, in label space.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopologyReport {
    pub variant: PointVariant,
    pub cliques: Vec<Vec<String>>,
    /// Points under the selected variant.
    pub points: Vec<Vec<String>>,
    pub points_subfamily: Vec<Vec<String>>,
    pub points_per_observable: Vec<Vec<String>>,
    /// Maximal pairwise-commuting families of points, as point indices.
    pub hypersurfaces: Vec<Vec<usize>>,
    /// Commutant neighbourhood of each point, as point indices.
    pub neighbourhoods: Vec<Vec<usize>>,
    pub open_set_count: Option<usize>,
    pub flags: TopologyFlags,
    pub longest_chain: usize,
    pub max_hypersurface: usize,
    #[serde(skip)]
    pub topology: FiniteTopology,
}

fn labelled(g: &CommutationGraph, family: &[BitSet]) -> Vec<Vec<String>> {
    family
        .iter()
        .map(|s| s.iter().map(|i| g.label(i).to_string()).collect())
        .collect()
}

/// Point-level commutation relation: two points commute when all their
/// observables do.
pub fn point_graph(g: &CommutationGraph, points: &PointSet) -> Result<CommutationGraph> {
    let mut pg = CommutationGraph::new((0..points.len()).map(|i| format!("p{i}")).collect())?;
    for i in 0..points.len() {
        for j in commutant_neighbourhood(g, points, i)? {
            if j > i {
                pg.add_edge_index(i, j);
            }
        }
    }
    Ok(pg)
}

pub fn topology_report(g: &CommutationGraph, options: ReportOptions) -> Result<TopologyReport> {
    let cliques = maximal_cliques(g)?;
    let sub = points_from_cliques(g.len(), &cliques, PointVariant::SubfamilyIntersection)?;
    let per = points_from_cliques(g.len(), &cliques, PointVariant::PerObservable)?;
    let chosen = match options.variant {
        PointVariant::SubfamilyIntersection => &sub,
        PointVariant::PerObservable => &per,
    };

    let m = chosen.len();
    let neighbourhoods: Vec<Vec<usize>> = (0..m)
        .map(|i| commutant_neighbourhood(g, chosen, i))
        .collect::<Result<_>>()?;
    let subbasis: Vec<BitSet> = neighbourhoods
        .iter()
        .map(|n| BitSet::from_indices(m, n.iter().copied()))
        .collect();
    let topology = generate_topology(&subbasis, m, options.include_point_complements)?;

    let hypersurfaces: Vec<Vec<usize>> = maximal_cliques(&point_graph(g, chosen)?)?
        .iter()
        .map(|h| h.to_vec())
        .collect();
    let max_hypersurface = hypersurfaces.iter().map(Vec::len).max().unwrap_or(0);

    Ok(TopologyReport {
        variant: options.variant,
        cliques: labelled(g, &cliques),
        points: labelled(g, &chosen.points),
        points_subfamily: labelled(g, &sub.points),
        points_per_observable: labelled(g, &per.points),
        hypersurfaces,
        neighbourhoods,
        open_set_count: topology.open_set_count(),
        flags: TopologyFlags {
            is_t0: topology.is_t0,
            is_t1: topology.is_t1,
            points_closed: topology.points_closed,
            discrete: topology.is_discrete(),
            size_cap_hit: topology.size_cap_hit,
            covers_observables_subfamily: sub.covers_observables(),
            covers_observables_per_observable: per.covers_observables(),
        },
        longest_chain: topology.longest_chain(),
        max_hypersurface,
        topology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_of_disjoint_cliques_has_singleton_hypersurfaces() {
        let g = CommutationGraph::disjoint_cliques(4, 3).unwrap();
        let r = topology_report(&g, ReportOptions::default()).unwrap();
        assert_eq!(r.points.len(), 4);
        assert!(r.hypersurfaces.iter().all(|h| h.len() == 1));
        assert!(r.flags.discrete);
        assert_eq!(r.open_set_count, Some(16));
        assert_eq!(r.longest_chain, 1);
        assert_eq!(r.max_hypersurface, 1);
    }

    #[test]
    fn complete_graph_has_one_hypersurface() {
        let g = CommutationGraph::complete(5).unwrap();
        let r = topology_report(&g, ReportOptions::default()).unwrap();
        assert_eq!(r.hypersurfaces, vec![vec![0]]);
        assert_eq!(r.points, vec![vec!["0", "1", "2", "3", "4"]]);
    }

    #[test]
    fn report_serializes_with_stable_keys() {
        let g = CommutationGraph::disjoint_cliques(2, 2).unwrap();
        let r = topology_report(&g, ReportOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["points", "cliques", "openSetCount", "flags"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
