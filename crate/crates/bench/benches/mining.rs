use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tirp_bench::{ordered_pairs, planted_workload};
use tirp_core::kbta::abstract_all;
use tirp_core::{classify, compare_cohorts, mine, CohortData, MinerConfig, RelationConfig, StatsConfig};

fn miner_config(min_support: f64, max_len: usize) -> MinerConfig {
    MinerConfig { min_support, relation: RelationConfig { epsilon: 0, max_gap: 720 }, max_pattern_len: max_len }
}

fn bench_mining(c: &mut Criterion) {
    let mut group = c.benchmark_group("mine");
    group.sample_size(10);
    for per_class in [50, 150] {
        let w = planted_workload(per_class, 20.0, 1);
        for min_support in [0.3, 0.1] {
            let cfg = miner_config(min_support, 3);
            group.bench_with_input(
                BenchmarkId::new(format!("ms{min_support}"), per_class),
                &w,
                |b, w| b.iter(|| mine(black_box(&w.case), w.per_class, &cfg).unwrap()),
            );
        }
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let pairs = ordered_pairs(40);
    let mut group = c.benchmark_group("classify");
    for epsilon in [0, 2] {
        let cfg = RelationConfig { epsilon, max_gap: 10 };
        group.bench_function(BenchmarkId::new("pairs", epsilon), |b| {
            b.iter(|| pairs.iter().filter(|(a, x)| classify(*a, *x, &cfg).is_some()).count())
        });
    }
    group.finish();
}

fn bench_kbta(c: &mut Criterion) {
    let w = planted_workload(150, 20.0, 2);
    c.bench_function("abstract_all/300", |b| b.iter(|| abstract_all(black_box(&w.samples), &w.ids, &w.kb)));
}

fn bench_compare(c: &mut Criterion) {
    let w = planted_workload(100, 20.0, 3);
    let cfg = miner_config(0.1, 3);
    let mined_case = mine(&w.case, w.per_class, &cfg).unwrap();
    let mined_control = mine(&w.control, w.per_class, &cfg).unwrap();
    let a = CohortData { label: "case", entities: &w.case, cohort_size: w.per_class, mined: &mined_case, config: &cfg };
    let b = CohortData {
        label: "control",
        entities: &w.control,
        cohort_size: w.per_class,
        mined: &mined_control,
        config: &cfg,
    };
    let mut group = c.benchmark_group("compare");
    group.sample_size(10);
    group.bench_function("cohorts/200", |bench| bench.iter(|| compare_cohorts(&a, &b, &StatsConfig::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_mining, bench_classify, bench_kbta, bench_compare);
criterion_main!(benches);
