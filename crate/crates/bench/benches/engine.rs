use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sewing_bench::{dense_series, four_point_heisenberg, partition_request};
use sewing_core::casimir_subalgebra::pv_filtration;
use sewing_core::correlators::wick_monomials;
use sewing_core::lattice::{count_by_norm, EvenLattice, LatticeVoa};
use sewing_core::partition::partition_series;

fn series(c: &mut Criterion) {
    let s = dense_series(8);
    c.bench_function("series/mul_trunc8", |b| b.iter(|| black_box(&s).mul(&s).unwrap()));
    c.bench_function("series/inv_trunc8", |b| b.iter(|| black_box(&s).inv().unwrap()));
}

fn correlators(c: &mut Criterion) {
    let (voa, states, points) = four_point_heisenberg();
    let refs: Vec<_> = states.iter().collect();
    c.bench_function("wick/four_point_weight2", |b| b.iter(|| wick_monomials(&voa, black_box(&refs), &points).unwrap()));
}

fn partitions(c: &mut Criterion) {
    let mut g = c.benchmark_group("partition");
    g.sample_size(10);
    for (name, model, genus, trunc) in
        [("heisenberg1_g1_n4", "heisenberg:1", 1, 4), ("a1_g1_n3", "lattice:A1", 1, 3), ("heisenberg1_g2_n2", "heisenberg:1", 2, 2)]
    {
        let req = partition_request(model, genus, trunc);
        g.bench_function(name, |b| b.iter(|| partition_series(black_box(&req)).unwrap()));
    }
    g.finish();
}

fn lattices(c: &mut Criterion) {
    let e8 = EvenLattice::fixture("E8").unwrap();
    let mut g = c.benchmark_group("lattice");
    g.sample_size(10);
    g.bench_function("e8_shells_to_norm6", |b| b.iter(|| count_by_norm(black_box(&e8), 6).unwrap()));
    g.finish();
}

fn casimir(c: &mut Criterion) {
    let voa = LatticeVoa::heisenberg(1);
    let mut g = c.benchmark_group("casimir");
    g.sample_size(10);
    g.bench_function("pv_heisenberg_w4", |b| b.iter(|| pv_filtration(black_box(&voa), 4).unwrap()));
    g.finish();
}

criterion_group!(benches, series, correlators, partitions, lattices, casimir);
criterion_main!(benches);
