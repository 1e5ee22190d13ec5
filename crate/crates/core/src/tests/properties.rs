use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::acceptance::{random_events, random_graph};
use crate::causal::{self, classical_order};
use crate::entanglement::{self, ChshSettings};
use crate::lattice::{LatticeSpec, Modes};
use crate::linalg::{self, Matrix};
use crate::quantum::{self, pauli, StateVector, UnitaryOp};
use crate::scenario::{self, RunOptions};
use crate::topology::{self, generate_topology, oracle, sort_family, BitSet, PointVariant};

fn state(qubits: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << qubits)
        .prop_filter_map("non-zero", |v| {
            StateVector::normalized(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).ok()
        })
}

fn axis() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(|(theta, phi)| {
        [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
    })
}

/// exp(-i θ n·σ) on one site of a register.
fn rotation(n: [f64; 3], theta: f64, site: usize, sites: usize) -> UnitaryOp {
    let [sx, sy, sz] = pauli();
    let generator = &(&sx.scale(n[0].into()) + &sy.scale(n[1].into())) + &sz.scale(n[2].into());
    let local = &Matrix::identity(2).scale(theta.cos().into()) - &generator.scale(Complex64::new(0.0, theta.sin()));
    let left = Matrix::identity(1 << site);
    let right = Matrix::identity(1 << (sites - site - 1));
    UnitaryOp::new(left.kron(&local).kron(&right)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn born_probabilities_sum_to_one(psi in state(3), n in axis(), site in 0usize..3) {
        let obs = quantum::spin_pvm(n).unwrap().on_site(site, 3).unwrap();
        let record = quantum::measure_probabilities(&obs, &psi).unwrap();
        prop_assert!((record.total() - 1.0).abs() <= 1e-12);
        prop_assert!(record.outcomes.iter().all(|o| o.probability >= -1e-15));
    }

    #[test]
    fn collapse_is_repeatable(psi in state(2), n in axis(), site in 0usize..2) {
        let obs = quantum::spin_pvm(n).unwrap().on_site(site, 2).unwrap();
        let record = quantum::measure_probabilities(&obs, &psi).unwrap();
        for (branch, o) in record.outcomes.iter().enumerate() {
            if o.probability <= quantum::IMPOSSIBLE_PROB {
                continue;
            }
            let after = quantum::collapse(&obs, branch, &psi).unwrap();
            prop_assert!((after.norm() - 1.0).abs() <= 1e-12);
            let again = quantum::measure_probabilities(&obs, &after).unwrap();
            prop_assert!((again.outcomes[branch].probability - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn unitaries_preserve_inner_products(
        a in state(2), b in state(2), n in axis(), theta in -3.2f64..3.2, site in 0usize..2,
    ) {
        let u = rotation(n, theta, site, 2);
        let ua = quantum::apply_unitary(&u, &a).unwrap();
        let ub = quantum::apply_unitary(&u, &b).unwrap();
        let before = linalg::inner(a.amplitudes(), b.amplitudes());
        let after = linalg::inner(ua.amplitudes(), ub.amplitudes());
        prop_assert!((before - after).norm() <= 1e-12);
    }

    #[test]
    fn remote_axis_choice_never_signals(psi in state(2), local in axis(), r1 in axis(), r2 in axis()) {
        let pl = quantum::spin_pvm(local).unwrap();
        let p1 = quantum::spin_pvm(r1).unwrap();
        let p2 = quantum::spin_pvm(r2).unwrap();
        for (site, other) in [(0, 1), (1, 0)] {
            let m1 = entanglement::marginal(&psi, &pl, site, &p1, other).unwrap();
            let m2 = entanglement::marginal(&psi, &pl, site, &p2, other).unwrap();
            for (x, y) in m1.iter().zip(&m2) {
                prop_assert!((x.1 - y.1).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn remote_unitaries_never_signal(psi in state(2), n in axis(), theta in -3.2f64..3.2, local in axis()) {
        let obs = quantum::spin_pvm(local).unwrap().on_site(0, 2).unwrap();
        let before = quantum::measure_probabilities(&obs, &psi).unwrap();
        let kicked = quantum::apply_unitary(&rotation(n, theta, 1, 2), &psi).unwrap();
        let after = quantum::measure_probabilities(&obs, &kicked).unwrap();
        for (x, y) in before.outcomes.iter().zip(&after.outcomes) {
            prop_assert!((x.probability - y.probability).abs() <= 1e-10);
        }
    }

    #[test]
    fn chsh_respects_tsirelson(psi in state(2), a in (0.0f64..6.3, 0.0f64..6.3), b in (0.0f64..6.3, 0.0f64..6.3)) {
        let s = entanglement::chsh(&psi, &ChshSettings::xz(a.0, a.1, b.0, b.1)).unwrap();
        prop_assert!(s.abs() <= 2.0 * SQRT_2 + 1e-10);
    }

    #[test]
    fn lattice_symmetries(
        sites in 8usize..80, mass in 0.05f64..3.0, dx in -200i64..200, dt in -40.0f64..40.0,
    ) {
        let modes = Modes::new(&LatticeSpec::new(sites, mass, 2).unwrap());
        let n = sites as i64;
        prop_assert!(modes.commutator(dx, 0.0).abs() <= 1e-12);
        prop_assert!((modes.commutator(dx, dt) + modes.commutator(-dx, -dt)).abs() <= 1e-12);
        prop_assert_eq!(modes.commutator(dx, dt), modes.commutator(dx + n, dt));
        prop_assert_eq!(modes.commutator(dx, dt), modes.commutator(-dx, dt));
    }

    #[test]
    fn points_match_the_brute_force_oracle(seed in any::<u64>(), n in 1usize..=12, p in 0.05f64..0.95) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let sub = topology::points_of_m(&g, PointVariant::SubfamilyIntersection).unwrap();
        let mut fast = sub.points.clone();
        let mut slow = oracle::brute_force_points(&g);
        sort_family(&mut fast);
        sort_family(&mut slow);
        prop_assert_eq!(fast, slow);
        prop_assert!(sub.is_antichain());
        prop_assert!(sub.points.iter().all(|pt| g.is_clique(pt)));

        let per = topology::points_of_m(&g, PointVariant::PerObservable).unwrap();
        prop_assert!(per.covers_observables());
        for i in 0..sub.len() {
            prop_assert!(topology::commutant_neighbourhood(&g, &sub, i).unwrap().contains(&i));
        }
    }

    #[test]
    fn generated_topologies_are_closed(seed in any::<u64>(), points in 1usize..7, members in 0usize..5) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let subbasis: Vec<BitSet> = (0..members)
            .map(|_| BitSet::from_indices(points, (0..points).filter(|_| rng.gen_bool(0.5))))
            .collect();
        let t = generate_topology(&subbasis, points, false).unwrap();
        prop_assert!(t.is_closed_family());
        prop_assert!(subbasis.iter().all(|s| t.is_open(s)));
        let chain = t.longest_chain();
        prop_assert!(chain >= 1 && chain <= points);
    }

    #[test]
    fn causal_orders_are_partial_orders(seed in any::<u64>(), count in 2usize..7) {
        let events = random_events(&mut ChaCha8Rng::seed_from_u64(seed), count);
        let classical = classical_order(&events);
        prop_assert!(classical.is_partial_order());
        let summary = causal::enumerate_admissible_orientations(&events).unwrap();
        prop_assert!(summary.admissible >= 1);
        for q in &summary.admissible_orders {
            prop_assert!(q.is_partial_order());
            prop_assert!(q.contains(&classical));
        }
    }

    #[test]
    fn boosts_leave_the_light_cone_order_alone(seed in any::<u64>(), beta in -0.9f64..=0.9) {
        let events = random_events(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let boosted = causal::boost(&events, beta).unwrap();
        prop_assert_eq!(classical_order(&boosted), classical_order(&events));
    }

    #[test]
    fn unknown_keys_never_run(key in "[a-z]{3,10}") {
        prop_assume!(!["axis", "particles", "trials", "seed", "output", "tolerance", "kind"].contains(&key.as_str()));
        let text = format!("kind = bell\naxis = z\n{key} = 1\n");
        let rejected = matches!(scenario::parse_scenario(&text), Err(scenario::ScenarioError::UnknownKey { .. }));
        prop_assert!(rejected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn same_seed_same_report(seed in any::<u64>()) {
        let s = scenario::parse_scenario("kind = epr\naxisA = z\naxisB = x\ntrials = 300\n").unwrap();
        let opts = RunOptions { seed: Some(seed), ..RunOptions::default() };
        let a = scenario::run_scenario(&s, &opts).unwrap().to_json_string();
        let b = scenario::run_scenario(&s, &opts).unwrap().to_json_string();
        prop_assert_eq!(a, b);
    }
}
