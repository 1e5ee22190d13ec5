use crate::causal::EventSet;
use crate::fixtures::{self, commuting_slices, Golden};
use crate::lattice::{self, cone_profile, extent_at, CommutatorTable, LatticeSpec, Modes};
use crate::topology::{topology_report, ReportOptions};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

fn golden() -> Golden {
    fixtures::golden()
}

#[test]
fn fixture_is_oracle_verified() {
    let g = golden();
    assert_eq!(g.status, fixtures::VERIFIED);
}

#[test]
fn pauli_jordan_matches_mode_sum_oracle() {
    for case in golden().pauli_jordan {
        let spec = LatticeSpec::new(case.sites, case.mass, 2).unwrap();
        let d = lattice::pauli_jordan(&spec, case.dx, case.dt);
        assert!(close(d, case.d), "{case:?}: got {d}");
    }
}

#[test]
fn adjacent_time_slices_do_not_commute() {
    let spec = LatticeSpec::new(64, 1.0, 2).unwrap();
    assert!(lattice::pauli_jordan(&spec, 0, 1.0).abs() > 1e-3);
    let g = lattice::commutation_graph(&spec, 1e-3).unwrap().graph;
    assert!(!g.commutes(0, 64));
}

#[test]
fn cone_profile_matches_oracle() {
    let c = golden().cone;
    let spec = LatticeSpec::new(c.sites, c.mass, c.time_steps).unwrap();
    let p = cone_profile(&spec, c.eps).unwrap();
    let extents: Vec<usize> = p.per_time_extent.iter().map(|&(_, e)| e).collect();
    assert_eq!(extents, c.extents);
    assert!(close(p.fitted_speed, c.fitted_speed));
    assert!(close(p.intercept, c.intercept));
    assert!(close(p.broadening(), c.broadening));
}

#[test]
fn cone_containment_does_not_regress() {
    let c = golden().cone_containment;
    for &m in &c.masses {
        let spec = LatticeSpec::new(c.sites, m, c.time_steps).unwrap();
        let modes = Modes::new(&spec);
        for dt in 1..=c.time_steps / 2 {
            let e = extent_at(&modes, c.sites, c.eps, dt as f64) as f64;
            assert!(e <= dt as f64 + c.broadening, "m = {m}, dt = {dt}: extent {e}");
        }
    }
}

#[test]
fn heavier_fields_never_outrun_the_light_field() {
    let sweep = golden().mass_sweep;
    let light = sweep.speeds[0].fitted_speed;
    for point in &sweep.speeds {
        let spec = LatticeSpec::new(sweep.sites, point.mass, sweep.time_steps).unwrap();
        let v = cone_profile(&spec, sweep.eps).unwrap().fitted_speed;
        assert!(close(v, point.fitted_speed), "m = {}: {v}", point.mass);
        let doubled = LatticeSpec::new(sweep.sites, 2.0 * point.mass, sweep.time_steps).unwrap();
        let v2 = cone_profile(&doubled, sweep.eps).unwrap().fitted_speed;
        assert!(v2 <= 1.1 * light, "m = {}: doubled speed {v2}", 2.0 * point.mass);
    }
}

#[test]
fn origin_commutes_across_many_slices() {
    let h = golden().hypersurfaces;
    let spec = LatticeSpec::new(h.sites, h.mass, h.time_steps).unwrap();
    assert_eq!(commuting_slices(&spec, h.eps), h.commuting_slices);
    assert!(h.commuting_slices.len() >= 2);

    let table = CommutatorTable::new(&spec);
    let g = lattice::graph_from_table(&table, h.eps).graph;
    let slices: std::collections::BTreeSet<usize> = (h.sites..g.len())
        .filter(|&v| g.commutes(0, v))
        .map(|v| v / h.sites)
        .collect();
    assert_eq!(slices.into_iter().collect::<Vec<_>>(), h.commuting_slices);
}

#[test]
fn small_lattice_graph_matches_networkx() {
    let l = golden().lattice_graph;
    let spec = LatticeSpec::new(l.sites, l.mass, l.time_steps).unwrap();
    let g = lattice::commutation_graph(&spec, l.eps).unwrap();
    assert!(g.degeneracy.is_none());
    let r = topology_report(&g.graph, ReportOptions::default()).unwrap();
    assert_eq!(r.cliques.len(), l.clique_count);
    assert_eq!(r.points.len(), l.point_count);
    assert_eq!(r.max_hypersurface, l.max_hypersurface);
    assert_eq!(l.slice_count, l.time_steps);
}

#[test]
fn orientation_summary_matches_brute_force() {
    let o = golden().orientations;
    let s = crate::causal::enumerate_admissible_orientations(&EventSet::three_particle_fixture()).unwrap();
    assert_eq!((s.total, s.admissible), (o.total, o.admissible));
    let always: Vec<[String; 2]> = s
        .pairs
        .iter()
        .filter(|p| p.status == crate::causal::Comparability::All)
        .map(|p| [p.a.clone(), p.b.clone()])
        .collect();
    assert_eq!(always, o.always_comparable);
}

#[test]
fn regeneration_reproduces_the_fixture() {
    let fresh = fixtures::regenerate().unwrap();
    assert_eq!(fresh.status, fixtures::UNVERIFIED);
    let mut g = golden();
    g.status = fresh.status.clone();
    g.generator = fresh.generator.clone();
    let a = serde_json::to_value(&fresh).unwrap();
    let b = serde_json::to_value(&g).unwrap();
    assert!(values_close(&a, &b), "regenerated fixture drifted");
}

fn values_close(a: &serde_json::Value, b: &serde_json::Value) -> bool {
    use serde_json::Value::*;
    match (a, b) {
        (Number(x), Number(y)) => close(x.as_f64().unwrap(), y.as_f64().unwrap()),
        (Array(x), Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| values_close(p, q)),
        (Object(x), Object(y)) => x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| values_close(v, w))),
        _ => a == b,
    }
}

#[test]
fn fixture_json_round_trips() {
    let text = fixtures::to_json(&golden());
    let back: Golden = serde_json::from_str(&text).unwrap();
    assert_eq!(back, golden());
    assert!(text.ends_with("}\n"));
}
