use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use twistor_bench::monopole_point;
use twistor_core::monopole::{act, symplectic_residual, OrbitParameter};

fn monopole(c: &mut Criterion) {
    let m = monopole_point();
    let l = OrbitParameter::new(Complex64::new(0.3, -0.2));
    c.bench_function("act", |b| b.iter(|| act(black_box(l), black_box(&m))));
    c.bench_function("symplectic_residual", |b| b.iter(|| symplectic_residual(black_box(l), &m, 1e-3).unwrap()));
}

criterion_group!(benches, monopole);
criterion_main!(benches);
