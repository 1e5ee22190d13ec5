use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qcausal_bench::{chorded_cycle, spacelike_row};
use qcausal_core::causal::enumerate_admissible_orientations;
use qcausal_core::entanglement::{bell_phi_plus, maximize_chsh};
use qcausal_core::lattice::{cone_profile, CommutatorTable, LatticeSpec};
use qcausal_core::topology::{maximal_cliques, topology_report, ReportOptions};

fn lattice(c: &mut Criterion) {
    let spec = LatticeSpec::new(128, 0.1, 32).unwrap();
    c.bench_function("commutator_table_128x32", |b| b.iter(|| CommutatorTable::new(black_box(&spec))));
    c.bench_function("cone_profile_128x32", |b| b.iter(|| cone_profile(black_box(&spec), 1e-3).unwrap()));
}

fn topology(c: &mut Criterion) {
    let g = chorded_cycle(40);
    c.bench_function("maximal_cliques_40", |b| b.iter(|| maximal_cliques(black_box(&g)).unwrap()));
    let small = chorded_cycle(16);
    c.bench_function("topology_report_16", |b| {
        b.iter(|| topology_report(black_box(&small), ReportOptions::default()).unwrap())
    });
}

fn chsh(c: &mut Criterion) {
    let psi = bell_phi_plus();
    c.bench_function("chsh_grid_1deg", |b| b.iter(|| maximize_chsh(black_box(&psi), 1.0).unwrap()));
}

fn orientations(c: &mut Criterion) {
    let set = spacelike_row(6);
    let mut group = c.benchmark_group("orientations");
    group.sample_size(10);
    group.bench_function("row6_15_pairs", |b| {
        b.iter(|| enumerate_admissible_orientations(black_box(&set)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, lattice, topology, chsh, orientations);
criterion_main!(benches);
