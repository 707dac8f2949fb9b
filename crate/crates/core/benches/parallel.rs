//! Compares the parallel verification entry points against a handwritten
//! sequential sweep over the same seats, plus construction throughput.
//!
//! Built with the default `parallel` feature, `verify_robust` fans seats out
//! over rayon; the `seq` benchmarks always run one seat at a time, so the
//! pair shows the speedup directly. Without the feature both collapse to
//! sequential execution.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use knockout::{
    build_binary, build_ternary, reach_sets, verify_robust, BitString, TournamentTree,
};

fn sequential_verify(tree: &TournamentTree, k: u32) -> bool {
    let names: Vec<BitString> = tree.seed_names.iter().cloned().collect();
    names.iter().all(|name| {
        reach_sets(tree, name, k)
            .expect("names come from the tree")
            .only_strongest(0, k)
    })
}

fn bench_verification(c: &mut Criterion) {
    let ternary = build_ternary(16, 2).unwrap();
    let binary = build_binary(32, 2, 2).unwrap();

    let mut group = c.benchmark_group("verify_ternary_16_2");
    group.sample_size(10);
    group.bench_function("par", |b| {
        b.iter(|| assert!(verify_robust(&ternary, 2).unwrap().robust))
    });
    group.bench_function("seq", |b| b.iter(|| assert!(sequential_verify(&ternary, 2))));
    group.finish();

    let mut group = c.benchmark_group("verify_binary_32_2");
    group.sample_size(10);
    group.bench_function("par", |b| {
        b.iter(|| assert!(verify_robust(&binary, 2).unwrap().robust))
    });
    group.bench_function("seq", |b| b.iter(|| assert!(sequential_verify(&binary, 2))));
    group.finish();
}

fn bench_construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    group.bench_function("binary_64_3", |b| {
        b.iter_batched(
            || (),
            |_| build_binary(64, 3, 2).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("ternary_16_3", |b| {
        b.iter_batched(
            || (),
            |_| build_ternary(16, 3).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_verification, bench_construction);
criterion_main!(benches);
