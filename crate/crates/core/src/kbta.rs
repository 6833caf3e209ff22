//! Knowledge-based temporal abstraction: raw samples to State and Gradient
//! intervals.
//!
//! Consecutive samples are merged into one interval while their label stays
//! the same and the gap between them is at most the concept's
//! `interp_max_gap`. Intervals end at the last supporting sample; there is no
//! persistence beyond it.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::kb::{AbstractionRule, KnowledgeBase};
use crate::model::{EntityId, EntityIntervals, Kind, Sample, Symbol, SymbolicInterval, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateLabel {
    Low,
    Normal,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GradientLabel {
    Decreasing,
    Stable,
    Increasing,
}

impl StateLabel {
    pub fn rank(self) -> u8 {
        self as u8
    }
}

impl GradientLabel {
    pub fn rank(self) -> u8 {
        self as u8
    }
}

/// The normal range is closed: boundary values are Normal.
pub fn classify_state(value: f64, rule: &AbstractionRule) -> StateLabel {
    if value < rule.normal_low {
        StateLabel::Low
    } else if value > rule.normal_high {
        StateLabel::High
    } else {
        StateLabel::Normal
    }
}

/// A change of exactly `gradient_delta` is Stable.
///
/// Differences within a few ulps of the threshold count as equal to it, so
/// that e.g. 37.0 -> 37.5 is Stable regardless of decimal representation.
pub fn classify_gradient(prev: f64, next: f64, rule: &AbstractionRule) -> GradientLabel {
    let d = next - prev;
    let slack = prev.abs().max(next.abs()).max(rule.gradient_delta) * f64::EPSILON * 4.0;
    if d - rule.gradient_delta > slack {
        GradientLabel::Increasing
    } else if -d - rule.gradient_delta > slack {
        GradientLabel::Decreasing
    } else {
        GradientLabel::Stable
    }
}

fn symbols_for(concept: &str, rule: &AbstractionRule, kind: Kind) -> [Symbol; 3] {
    let labels = rule.labels(kind);
    [0u8, 1, 2].map(|r| Symbol::new(concept, kind, r, labels[r as usize]))
}

/// Merges labeled spans `(start, end, rank)` into maximal same-label runs.
/// `joined(i)` says whether span `i` connects to span `i + 1`.
fn merge_runs(
    spans: &[(Time, Time, u8)],
    joined: impl Fn(usize) -> bool,
    symbols: &[Symbol; 3],
) -> Vec<SymbolicInterval> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < spans.len() {
        let (start, mut end, rank) = spans[i];
        while i + 1 < spans.len() && joined(i) && spans[i + 1].2 == rank {
            i += 1;
            end = spans[i].1;
        }
        out.push(SymbolicInterval::new(symbols[rank as usize].clone(), start, end));
        i += 1;
    }
    out
}

/// State intervals for one (entity, concept) series sorted by time.
pub fn abstract_state_series(series: &[Sample], rule: &AbstractionRule) -> Vec<SymbolicInterval> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    let symbols = symbols_for(&first.concept, rule, Kind::State);
    let spans: Vec<(Time, Time, u8)> = series
        .iter()
        .map(|s| (s.t, s.t, classify_state(s.value, rule).rank()))
        .collect();
    merge_runs(
        &spans,
        |i| series[i + 1].t - series[i].t <= rule.interp_max_gap,
        &symbols,
    )
}

/// Gradient intervals for one (entity, concept) series sorted by time.
///
/// Each adjacent pair within `interp_max_gap` labels the span between the two
/// samples; pairs further apart emit nothing and break the run.
pub fn abstract_gradient_series(series: &[Sample], rule: &AbstractionRule) -> Vec<SymbolicInterval> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    let symbols = symbols_for(&first.concept, rule, Kind::Gradient);
    // Spans of valid pairs; `link[i]` is false where a skipped pair lies between
    // span i and span i + 1.
    let mut spans = Vec::new();
    let mut link = Vec::new();
    let mut prev_valid = false;
    for pair in series.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.t - a.t <= rule.interp_max_gap {
            if !spans.is_empty() {
                link.push(prev_valid);
            }
            spans.push((a.t, b.t, classify_gradient(a.value, b.value, rule).rank()));
            prev_valid = true;
        } else {
            prev_valid = false;
        }
    }
    merge_runs(&spans, |i| link[i], &symbols)
}

/// Output of abstracting one entity.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityAbstraction {
    pub intervals: EntityIntervals,
    /// Concepts present in the events but absent from the knowledge base.
    pub unknown_concepts: BTreeSet<String>,
}

/// State and gradient intervals of every known concept of one entity, sorted
/// by (start, end, symbol). Unknown concepts are skipped.
pub fn abstract_entity(entity: EntityId, samples: &[Sample], kb: &KnowledgeBase) -> EntityAbstraction {
    let mut by_concept: BTreeMap<&str, Vec<&Sample>> = BTreeMap::new();
    for s in samples {
        debug_assert_eq!(s.entity, entity);
        by_concept.entry(&s.concept).or_default().push(s);
    }
    let mut intervals = Vec::new();
    let mut unknown_concepts = BTreeSet::new();
    for (concept, mut series) in by_concept {
        let Some(rule) = kb.get(concept) else {
            unknown_concepts.insert(concept.to_string());
            continue;
        };
        series.sort_by_key(|s| s.t);
        let series: Vec<Sample> = series.into_iter().cloned().collect();
        intervals.extend(abstract_state_series(&series, rule));
        intervals.extend(abstract_gradient_series(&series, rule));
    }
    EntityAbstraction {
        intervals: EntityIntervals::new(entity, intervals),
        unknown_concepts,
    }
}

/// Abstracts every entity in parallel.
///
/// `entities` lists entities to emit even if they have no samples; samples of
/// entities not listed are abstracted too. Output is sorted by entity id.
pub fn abstract_all(
    samples: &[Sample],
    entities: &[EntityId],
    kb: &KnowledgeBase,
) -> (Vec<EntityIntervals>, BTreeSet<String>) {
    let mut grouped: BTreeMap<EntityId, Vec<Sample>> =
        entities.iter().map(|e| (e.clone(), Vec::new())).collect();
    for s in samples {
        grouped.entry(s.entity.clone()).or_default().push(s.clone());
    }
    let results: Vec<EntityAbstraction> = grouped
        .into_par_iter()
        .map(|(entity, samples)| abstract_entity(entity, &samples, kb))
        .collect();
    let mut unknown = BTreeSet::new();
    let intervals = results
        .into_iter()
        .map(|r| {
            unknown.extend(r.unknown_concepts);
            r.intervals
        })
        .collect();
    (intervals, unknown)
}
