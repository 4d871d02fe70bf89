use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lpdp_bench::{warrant_system, BatchFixture, BATCH_SIZES};
use lpdp_core::primitives::CurveId;

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("upload_verification");
    for b in BATCH_SIZES {
        let fx = BatchFixture::new(CurveId::default(), b, b as u64);
        group.bench_with_input(BenchmarkId::new("batch", b), &fx, |bench, fx| {
            bench.iter(|| black_box(fx.verify_batch()))
        });
        group.bench_with_input(BenchmarkId::new("individual", b), &fx, |bench, fx| {
            bench.iter(|| black_box(fx.verify_each()))
        });
    }
    group.finish();
}

fn warrants(c: &mut Criterion) {
    let n_wi = 5;
    let mut group = c.benchmark_group("warrant");
    group.sample_size(20);
    let mut sys = warrant_system(n_wi, 1);
    group.bench_function(BenchmarkId::new("issue", n_wi), |bench| {
        bench.iter(|| black_box(sys.issue_warrant(0).expect("issuance")))
    });
    for n_u in [1, 3, 5] {
        let mut bit = false;
        group.bench_function(BenchmarkId::new("update", n_u), |bench| {
            bench.iter(|| {
                let delta: Vec<(usize, bool)> = (1..=n_u).map(|i| (i, bit)).collect();
                bit = !bit;
                black_box(sys.phase_update(0, &delta).expect("update"))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, verification, warrants);
criterion_main!(benches);
