use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use twistor_bench::{glt_grid, glt_problem};
use twistor_core::glt::{kahler_potential_and_metric, monge_ampere_residual, solve_constraints};

fn glt(c: &mut Criterion) {
    let p = glt_problem(0.1);
    let (z, u) = (Complex64::new(0.2, 0.1), Complex64::new(0.3, -0.1));
    c.bench_function("solve_constraints k=2", |b| b.iter(|| solve_constraints(black_box(&p), z, u).unwrap()));
    c.bench_function("potential_and_metric k=2", |b| {
        b.iter(|| kahler_potential_and_metric(black_box(&p), z, u).unwrap())
    });
    let grid = glt_grid(5);
    let mut group = c.benchmark_group("monge_ampere");
    group.sample_size(10);
    group.bench_function("5x5 k=2", |b| b.iter(|| monge_ampere_residual(black_box(&p), &grid).unwrap()));
    group.finish();
}

criterion_group!(benches, glt);
criterion_main!(benches);
