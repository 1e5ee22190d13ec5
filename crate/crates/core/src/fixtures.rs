//! Golden values computed by the independent mode-sum oracle
//! (`fixtures/mode_sum_oracle.py`) and a Rust-side regenerator that emits the
//! same schema for the oracle to confirm.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::causal::{enumerate_admissible_orientations, Comparability, EventSet};
use crate::lattice::{self, cone_profile, extent_at, LatticeSpec, Modes};
use crate::topology::{topology_report, ReportOptions};

pub const GOLDEN_JSON: &str = include_str!("../fixtures/golden.json");
pub const VERIFIED: &str = "VERIFIED";
pub const UNVERIFIED: &str = "UNVERIFIED";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Golden {
    pub status: String,
    pub generator: String,
    pub pauli_jordan: Vec<PauliJordanCase>,
    pub cone: ConeGolden,
    pub cone_containment: ConeContainment,
    pub mass_sweep: MassSweep,
    pub hypersurfaces: Hypersurfaces,
    pub lattice_graph: LatticeGraphGolden,
    pub orientations: Orientations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliJordanCase {
    pub sites: usize,
    pub mass: f64,
    pub dx: i64,
    pub dt: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConeGolden {
    pub sites: usize,
    pub mass: f64,
    pub time_steps: usize,
    pub eps: f64,
    pub extents: Vec<usize>,
    pub fitted_speed: f64,
    pub intercept: f64,
    pub broadening: f64,
}

/// Worst excess of the non-commuting extent over `|dx| = dt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConeContainment {
    pub sites: usize,
    pub time_steps: usize,
    pub eps: f64,
    pub masses: Vec<f64>,
    pub broadening: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MassSweep {
    pub sites: usize,
    pub time_steps: usize,
    pub eps: f64,
    pub speeds: Vec<SweepPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepPoint {
    pub mass: f64,
    pub fitted_speed: f64,
}

/// Time slices `t != 0` holding a vertex that commutes with (0, 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Hypersurfaces {
    pub sites: usize,
    pub mass: f64,
    pub time_steps: usize,
    pub eps: f64,
    pub commuting_slices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LatticeGraphGolden {
    pub sites: usize,
    pub mass: f64,
    pub time_steps: usize,
    pub eps: f64,
    pub clique_count: usize,
    pub slice_count: usize,
    pub point_count: usize,
    pub max_hypersurface: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Orientations {
    pub fixture: String,
    pub total: usize,
    pub admissible: usize,
    pub always_comparable: Vec<[String; 2]>,
}

pub fn golden() -> Golden {
    serde_json::from_str(GOLDEN_JSON).expect("embedded golden fixture parses")
}

/// Slices `1..T` on which the origin commutes with some lattice site.
pub fn commuting_slices(spec: &LatticeSpec, eps: f64) -> Vec<usize> {
    let modes = Modes::new(spec);
    (1..spec.time_steps)
        .filter(|&t| {
            let dt = t as f64 * spec.time_step;
            (0..spec.sites as i64).any(|dx| modes.commutator(dx, dt).abs() < eps)
        })
        .collect()
}

/// Recomputes every golden value with this crate's own kernels.
pub fn regenerate() -> Result<Golden, Box<dyn std::error::Error + Send + Sync>> {
    let mut pauli_jordan = Vec::new();
    for (sites, mass, dx, dt) in [
        (64, 1.0, 0, 1.0),
        (64, 1.0, 3, 2.0),
        (64, 1.0, -7, 5.5),
        (128, 0.1, 10, 12.0),
        (8, 1.0, 1, 1.0),
    ] {
        let spec = LatticeSpec::new(sites, mass, 2)?;
        pauli_jordan.push(PauliJordanCase {
            sites,
            mass,
            dx,
            dt,
            d: lattice::pauli_jordan(&spec, dx, dt),
        });
    }

    let eps = 1e-3;
    let spec = LatticeSpec::new(128, 0.1, 32)?;
    let profile = cone_profile(&spec, eps)?;
    let cone = ConeGolden {
        sites: 128,
        mass: 0.1,
        time_steps: 32,
        eps,
        extents: profile.per_time_extent.iter().map(|&(_, e)| e).collect(),
        fitted_speed: profile.fitted_speed,
        intercept: profile.intercept,
        broadening: profile.broadening(),
    };

    let masses = vec![1.0, 2.0, 4.0];
    let mut worst = f64::NEG_INFINITY;
    for &m in &masses {
        let modes = Modes::new(&LatticeSpec::new(64, m, 32)?);
        for dt in 1..=16 {
            worst = worst.max(extent_at(&modes, 64, eps, dt as f64) as f64 - dt as f64);
        }
    }
    let cone_containment = ConeContainment {
        sites: 64,
        time_steps: 32,
        eps,
        masses,
        broadening: worst,
    };

    let mut speeds = Vec::new();
    for m in [0.01, 0.1, 0.2, 0.4, 0.8, 1.6] {
        let p = cone_profile(&LatticeSpec::new(128, m, 32)?, eps)?;
        speeds.push(SweepPoint {
            mass: m,
            fitted_speed: p.fitted_speed,
        });
    }

    let hs = LatticeSpec::new(64, 1.0, 16)?;
    let hypersurfaces = Hypersurfaces {
        sites: 64,
        mass: 1.0,
        time_steps: 16,
        eps,
        commuting_slices: commuting_slices(&hs, eps),
    };

    let small = LatticeSpec::new(8, 1.0, 4)?;
    let lg = lattice::commutation_graph(&small, eps)?;
    let report = topology_report(&lg.graph, ReportOptions::default())?;
    let lattice_graph = LatticeGraphGolden {
        sites: 8,
        mass: 1.0,
        time_steps: 4,
        eps,
        clique_count: report.cliques.len(),
        slice_count: 4,
        point_count: report.points.len(),
        max_hypersurface: report.max_hypersurface,
    };

    let summary = enumerate_admissible_orientations(&EventSet::three_particle_fixture())?;
    let orientations = Orientations {
        fixture: "F3".into(),
        total: summary.total,
        admissible: summary.admissible,
        always_comparable: summary
            .pairs
            .iter()
            .filter(|p| p.status == Comparability::All)
            .map(|p| [p.a.clone(), p.b.clone()])
            .collect(),
    };

    Ok(Golden {
        status: UNVERIFIED.into(),
        generator: "qcausal regen-fixtures".into(),
        pauli_jordan,
        cone,
        cone_containment,
        mass_sweep: MassSweep {
            sites: 128,
            time_steps: 32,
            eps,
            speeds,
        },
        hypersurfaces,
        lattice_graph,
        orientations,
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json(golden: &Golden) -> String {
    let value = serde_json::to_value(golden).expect("fixture serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

pub fn write(golden: &Golden, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_json(golden))
}
