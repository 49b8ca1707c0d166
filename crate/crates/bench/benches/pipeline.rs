use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use xyzchain_bench::chain;
use xyzchain_core::{
    build_hamiltonian, gibbs_state, hermitian_eig, pairwise_concurrence, run_sweep, Axis, SweepParam, SweepSpec,
};

fn eig(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermitian_eig");
    for n in [2, 3, 4, 6] {
        let h = build_hamiltonian(&chain(n)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| hermitian_eig(black_box(h)).unwrap())
        });
    }
    g.finish();
}

fn gibbs(c: &mut Criterion) {
    let mut g = c.benchmark_group("gibbs_state");
    for n in [2, 3, 6] {
        let h = build_hamiltonian(&chain(n)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| gibbs_state(black_box(h), 0.6).unwrap())
        });
    }
    g.finish();
}

fn concurrence(c: &mut Criterion) {
    let mut g = c.benchmark_group("pairwise_concurrence");
    for n in [2, 3, 6] {
        let p = chain(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| pairwise_concurrence(black_box(p), 0.6, (0, 1)).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec::new(
        chain(2),
        vec![
            Axis::new(SweepParam::B, 0.0, 4.0, 51).unwrap(),
            Axis::new(SweepParam::T, 0.01, 2.0, 50).unwrap(),
        ],
        0.0,
    );
    c.bench_function("sweep_2550_points", |b| {
        b.iter(|| run_sweep(black_box(&spec), None).unwrap())
    });
}

criterion_group!(benches, eig, gibbs, concurrence, sweep);
criterion_main!(benches);
