//! Parallel-versus-sequential comparison for the three data-parallel
//! kernels: the entropy-ratio grid sweep, the per-m copy-ratio sweep, and
//! the catalyst grid scan. The default-path functions dispatch to rayon
//! when the `parallel` feature is on; the `_seq` variants always run
//! single-threaded, so benching both shows what the feature buys.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use entrate::entropy::{entropy_ratio, entropy_ratio_seq};
use entrate::rates::{
    catalyst_search_2level, catalyst_search_2level_seq, rate_lower_bound, rate_lower_bound_seq,
};
use entrate::spectrum::parse_spectrum;
use entrate::GroupedSpectrum;

fn incomparable_pair() -> (GroupedSpectrum, GroupedSpectrum) {
    let a = parse_spectrum(&["0.40", "0.36", "0.14", "0.10"])
        .unwrap()
        .to_grouped();
    let b = parse_spectrum(&["0.50", "0.25", "0.25"]).unwrap().to_grouped();
    (a, b)
}

fn entropy_grid(c: &mut Criterion) {
    let (a, b) = incomparable_pair();
    let big_a = a.power(6).unwrap();
    let big_b = b.power(6).unwrap();
    let mut g = c.benchmark_group("entropy_ratio_grid");
    g.sample_size(20);
    g.bench_function("default", |bch| {
        bch.iter(|| black_box(entropy_ratio(&big_a, &big_b).unwrap()))
    });
    g.bench_function("sequential", |bch| {
        bch.iter(|| black_box(entropy_ratio_seq(&big_a, &big_b).unwrap()))
    });
    g.finish();
}

fn copy_ratio_sweep(c: &mut Criterion) {
    let (a, b) = incomparable_pair();
    let mut g = c.benchmark_group("rate_lower_bound_sweep");
    g.sample_size(10);
    g.bench_function("default", |bch| {
        bch.iter(|| black_box(rate_lower_bound(&a, &b, 10).unwrap()))
    });
    g.bench_function("sequential", |bch| {
        bch.iter(|| black_box(rate_lower_bound_seq(&a, &b, 10).unwrap()))
    });
    g.finish();
}

fn catalyst_grid(c: &mut Criterion) {
    let (a, b) = incomparable_pair();
    let source = a.power(7).unwrap();
    let target = b.power(8).unwrap();
    let mut g = c.benchmark_group("catalyst_grid_scan");
    g.sample_size(10);
    g.bench_function("default", |bch| {
        bch.iter(|| black_box(catalyst_search_2level(&source, &target, 40, 4)))
    });
    g.bench_function("sequential", |bch| {
        bch.iter(|| black_box(catalyst_search_2level_seq(&source, &target, 40, 4)))
    });
    g.finish();
}

criterion_group!(benches, entropy_grid, copy_ratio_sweep, catalyst_grid);
criterion_main!(benches);
