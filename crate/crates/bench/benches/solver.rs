use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wake_bench::setup;
use wake_core::solver::{picard_solve, DuhamelMap};

/// One application of the Duhamel map (a full downstream sweep over every
/// station) to a converged state.
fn duhamel_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("duhamel_sweep");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    for (ny, nx) in [(256, 80), (512, 160)] {
        let (p, g, b) = setup(ny, 2, nx);
        let state = picard_solve(&p, &g, &b).unwrap();
        let map = DuhamelMap::new(&p, &g, &b).unwrap();
        group.bench_with_input(BenchmarkId::new("ny_nx", format!("{ny}x{nx}")), &ny, |bench, _| {
            bench.iter(|| map.apply(&state).unwrap())
        });
    }
    group.finish();
}

/// The whole fixed-point solve at a reduced resolution.
fn picard(c: &mut Criterion) {
    let mut group = c.benchmark_group("picard_solve");
    group.sample_size(10).measurement_time(Duration::from_secs(30));
    let (p, g, b) = setup(256, 2, 80);
    group.bench_function("ny256_nx80", |bench| bench.iter(|| picard_solve(&p, &g, &b).unwrap()));
    group.finish();
}

criterion_group!(benches, duhamel_sweep, picard);
criterion_main!(benches);
