use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use paracr_bench::{dense_poly, matrix, surfaces};
use paracr_core::linalg;
use paracr_core::liealg::{profile, structure_constants};
use paracr_core::solver::default_weight_cap;
use paracr_core::{solve_algebra, solve_weight};

fn bench_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_algebra");
    g.sample_size(10);
    for (name, s) in surfaces() {
        let cap = default_weight_cap(&s);
        g.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| {
            b.iter(|| solve_algebra(black_box(s), cap).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("solve_weight");
    for (name, s) in surfaces() {
        let k = i64::from(s.k());
        g.bench_with_input(BenchmarkId::new(name, k), &s, |b, s| b.iter(|| solve_weight(black_box(s), k)));
    }
    g.finish();
}

fn bench_profile(c: &mut Criterion) {
    let mut g = c.benchmark_group("profile");
    for (name, s) in surfaces() {
        let alg = solve_algebra(&s, default_weight_cap(&s)).unwrap();
        let sc = structure_constants(&alg).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &sc, |b, sc| b.iter(|| profile(black_box(sc))));
    }
    g.finish();
}

fn bench_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    for (rows, cols) in [(10, 14), (20, 28), (40, 56)] {
        let m = matrix(rows, cols);
        let id = format!("{rows}x{cols}");
        g.bench_with_input(BenchmarkId::new("bareiss", &id), &m, |b, m| {
            b.iter(|| linalg::kernel(black_box(m), cols))
        });
        g.bench_with_input(BenchmarkId::new("rref", &id), &m, |b, m| {
            b.iter(|| linalg::kernel_rref(black_box(m), cols))
        });
    }
    g.finish();
}

fn bench_poly(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly_mul");
    for n in [3u32, 5, 7] {
        let p = dense_poly(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| black_box(p) * black_box(p)));
    }
    g.finish();
}

criterion_group!(benches, bench_solve, bench_profile, bench_kernel, bench_poly);
criterion_main!(benches);
