//! Deterministic workloads shared by the benchmarks.

use tirp_core::kbta::abstract_all;
use tirp_core::synth::{generate, PlantedSpec, SynthConfig};
use tirp_core::{EntityId, EntityIntervals, KnowledgeBase, Sample, Time};

/// A two-class synthetic cohort, raw and abstracted.
pub struct Workload {
    pub kb: KnowledgeBase,
    pub ids: Vec<EntityId>,
    pub samples: Vec<Sample>,
    pub case: Vec<EntityIntervals>,
    pub control: Vec<EntityIntervals>,
    pub per_class: usize,
}

/// `per_class` entities in each class over three vitals, with one planted
/// meets pair (60% vs 10%) and `noise` excursions per entity.
pub fn planted_workload(per_class: usize, noise: f64, seed: u64) -> Workload {
    let kb = KnowledgeBase::sepsis();
    let cfg = SynthConfig {
        n_case: per_class,
        n_control: per_class,
        concepts: vec!["BodyTemperature".into(), "HeartRate".into(), "RespiratoryRate".into()],
        planted: vec![PlantedSpec {
            tirp: "BodyTemperature.S.High|HeartRate.S.High;m".into(),
            case_rate: 0.6,
            control_rate: 0.1,
        }],
        noise_intervals_per_entity: noise,
        horizon: 2880,
        seed,
        sample_step: 60,
        max_noise_len: 3,
        kb: None,
        class_labels: ["case".into(), "control".into()],
    };
    let cohort = generate(&cfg, &kb).expect("valid synthetic config");
    let ids: Vec<EntityId> = cohort.labels.keys().cloned().collect();
    let (intervals, _) = abstract_all(&cohort.samples, &ids, &kb);
    let (case, control) = intervals.into_iter().partition(|e| cohort.labels[&e.entity] == "case");
    Workload { kb, ids, samples: cohort.samples, case, control, per_class }
}

/// Every lexicographically ordered pair of intervals with endpoints in
/// `0..=max`.
pub fn ordered_pairs(max: Time) -> Vec<((Time, Time), (Time, Time))> {
    let ivs: Vec<(Time, Time)> = (0..=max).flat_map(|s| (s..=max).map(move |e| (s, e))).collect();
    let mut pairs = Vec::new();
    for &a in &ivs {
        pairs.extend(ivs.iter().filter(|&&b| a <= b).map(|&b| (a, b)));
    }
    pairs
}
