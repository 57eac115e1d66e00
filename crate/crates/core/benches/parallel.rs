//! One-thread pool against the default pool on the three hot loops.
//!
//! `cargo bench -p cinorm-core` compares both pools;
//! `cargo bench -p cinorm-core --no-default-features` runs the plain
//! sequential build, where both arms are identical.

use cinorm::displacement::displacement_energy;
use cinorm::group::{FiniteGroup, GroupDescriptor, SubgroupSpec, DEFAULT_LIMIT};
use cinorm::norms::{qk_norm_in, SupportNorm};
use cinorm::par;
use cinorm::suites::{run_suite, SuiteConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const POOLS: [(&str, usize); 2] = [("1-thread", 1), ("default", 0)];

fn bench_qk_bfs(c: &mut Criterion) {
    let d: GroupDescriptor = "an:7".parse().unwrap();
    let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT).unwrap();
    let k = vec![d.parse_element("(1 2 3)").unwrap()];
    let mut group = c.benchmark_group("qk-bfs-a7");
    for (label, threads) in POOLS {
        group.bench_with_input(BenchmarkId::from_parameter(label), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(qk_norm_in(&g, &k).unwrap())))
        });
    }
    group.finish();
}

fn bench_displacer_scan(c: &mut Criterion) {
    let d: GroupDescriptor = "sn:8".parse().unwrap();
    let g = FiniteGroup::enumerate(&d, DEFAULT_LIMIT).unwrap();
    let h = SubgroupSpec::new(d.parse_elements("(1 2), (1 2 3)").unwrap());
    let mut group = c.benchmark_group("strong-displacer-scan-s8");
    group.sample_size(10);
    for (label, threads) in POOLS {
        group.bench_with_input(BenchmarkId::from_parameter(label), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(displacement_energy(&g, &h, 2, &SupportNorm).unwrap())))
        });
    }
    group.finish();
}

fn bench_seeded_trials(c: &mut Criterion) {
    let cfg = SuiteConfig { seed: 0, budget: Some(2000) };
    let mut group = c.benchmark_group("seeded-trials-gbar-defect");
    group.sample_size(10);
    for (label, threads) in POOLS {
        group.bench_with_input(BenchmarkId::from_parameter(label), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(run_suite("gbar-defect", &cfg).unwrap().report)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_qk_bfs, bench_displacer_scan, bench_seeded_trials);
criterion_main!(benches);
