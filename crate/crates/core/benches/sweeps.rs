//! Sequential vs rayon-parallel throughput on the three batch workloads.
//! Build with `--no-default-features` to check that the fallback compiles alone.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quadpair::batch::Mode;
use quadpair::fixtures::random_family;
use quadpair::selftest::{criticals_sweep, family_verdicts, jet_sqrt_batch, DEFAULT_SEED};
use std::hint::black_box;

const MODES: [(Mode, &str); 2] = [(Mode::Sequential, "sequential"), (Mode::Parallel, "parallel")];

fn criticals(c: &mut Criterion) {
    let mut group = c.benchmark_group("criticals_sweep");
    for (mode, name) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(criticals_sweep(mode))));
    }
    group.finish();
}

fn verdicts(c: &mut Criterion) {
    let mut group = c.benchmark_group("family_verdicts");
    group.sample_size(20);
    for size in [32usize, 128] {
        let family = random_family(2, 4, 9, size, DEFAULT_SEED);
        for (mode, name) in MODES {
            group.bench_with_input(BenchmarkId::new(name, size), &family, |b, fam| {
                b.iter(|| black_box(family_verdicts(fam, mode)))
            });
        }
    }
    group.finish();
}

fn jet_roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("jet_sqrt_batch");
    for count in [100usize, 1000] {
        for (mode, name) in MODES {
            group.bench_with_input(BenchmarkId::new(name, count), &count, |b, &n| {
                b.iter(|| black_box(jet_sqrt_batch(DEFAULT_SEED, n, mode)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, criticals, verdicts, jet_roots);
criterion_main!(benches);
