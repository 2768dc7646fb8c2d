use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use twistor_bench::gauged_transition;
use twistor_core::splitting_type;

fn splitting(c: &mut Criterion) {
    let mut group = c.benchmark_group("splitting_type");
    for degrees in [vec![3, -2], vec![4, 1, -3], vec![6, 2, -1, -5]] {
        let t = gauged_transition(&degrees);
        group.bench_with_input(BenchmarkId::from_parameter(degrees.len()), &t, |b, t| {
            b.iter(|| splitting_type(black_box(t)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, splitting);
criterion_main!(benches);
