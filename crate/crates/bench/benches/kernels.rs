use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use sixvertex_bench::parameters;
use sixvertex_core::exact::{h_sequence, hankel_tau, partition_float, toda_check};
use sixvertex_core::oracle::enumerate_configs;
use sixvertex_core::phase::{free_energy_AF, taylor_match};
use sixvertex_core::rhp::{Edge, EdgeMap};
use sixvertex_core::{airy, equilibrium::Equilibrium};

fn chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("h_sequence");
    for x in parameters() {
        for n in [32usize, 64] {
            g.bench_with_input(BenchmarkId::new(x.to_pq(), n), &n, |b, &n| {
                b.iter(|| h_sequence(black_box(n), &x).unwrap())
            });
        }
    }
    g.finish();
}

fn bareiss(c: &mut Criterion) {
    let x = &parameters()[1];
    c.bench_function("bareiss_tau_16", |b| b.iter(|| hankel_tau(black_box(16), x).unwrap()));
}

fn float_chain(c: &mut Criterion) {
    let x = &parameters()[1];
    c.bench_function("partition_float_64_256bits", |b| {
        b.iter(|| partition_float(black_box(64), x, 256, None).unwrap())
    });
}

fn toda(c: &mut Criterion) {
    let x = &parameters()[1];
    c.bench_function("toda_check_12", |b| b.iter(|| toda_check(black_box(12), x).unwrap()));
}

fn oracle(c: &mut Criterion) {
    c.bench_function("enumerate_configs_5", |b| b.iter(|| enumerate_configs(black_box(5)).unwrap()));
}

fn airy_eval(c: &mut Criterion) {
    let pts = [Complex64::new(0.5, 0.2), Complex64::new(-6.0, 3.0), Complex64::new(15.0, -9.0)];
    c.bench_function("airy_three_regions", |b| {
        b.iter(|| pts.iter().map(|&z| airy::airy(black_box(z)).0).sum::<Complex64>())
    });
}

fn analytic(c: &mut Criterion) {
    let eq = Equilibrium::new(0.3).unwrap();
    c.bench_function("variational_check_400", |b| b.iter(|| eq.variational_check(black_box(400))));
    let map = EdgeMap::new(Edge::Right, 64, 0.3).unwrap();
    let r = map.max_radius() / 2.0;
    c.bench_function("parametrix_residual_64pts", |b| {
        b.iter(|| map.max_residual(black_box(r), 64).unwrap())
    });
    c.bench_function("free_energy_af", |b| b.iter(|| free_energy_AF(black_box(0.3), -0.05).unwrap()));
    c.bench_function("taylor_match", |b| b.iter(|| taylor_match(black_box(0.3)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = chain, bareiss, float_chain, toda, oracle, airy_eval, analytic
}
criterion_main!(benches);
