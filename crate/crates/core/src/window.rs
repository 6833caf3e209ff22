//! Time-window extraction.
//!
//! Laboratory concepts are gathered from admission up to the reference time;
//! everything else only inside the trailing window. Both bounds are inclusive.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::io::ReferenceTimes;
use crate::model::{Cohort, EntityId, Sample, Time};

#[derive(Debug, Clone, PartialEq)]
pub struct WindowConfig {
    pub times: BTreeMap<EntityId, ReferenceTimes>,
    pub window_len: Time,
    pub lab_concepts: BTreeSet<String>,
}

impl WindowConfig {
    pub fn new(
        times: BTreeMap<EntityId, ReferenceTimes>,
        window_len: Time,
        lab_concepts: BTreeSet<String>,
    ) -> Result<Self> {
        if window_len <= 0 {
            return Err(Error::Config(format!("window length {window_len} must be positive")));
        }
        if let Some((e, _)) = times.iter().find(|(_, t)| t.reference < t.admission) {
            return Err(Error::Config(format!("reference time of {e:?} precedes admission")));
        }
        Ok(WindowConfig {
            times,
            window_len,
            lab_concepts,
        })
    }

    fn keeps(&self, times: &ReferenceTimes, sample: &Sample) -> bool {
        let from = if self.lab_concepts.contains(&*sample.concept) {
            times.admission
        } else {
            times.reference - self.window_len
        };
        (from..=times.reference).contains(&sample.t)
    }
}

/// Keeps the samples inside each entity's window, preserving order.
pub fn window_extract(samples: &[Sample], cfg: &WindowConfig) -> Result<Vec<Sample>> {
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        let times = cfg
            .times
            .get(&s.entity)
            .ok_or_else(|| Error::MissingReferenceTime(s.entity.to_string()))?;
        if cfg.keeps(times, s) {
            out.push(s.clone());
        }
    }
    Ok(out)
}

pub fn window_cohort(cohort: &Cohort, cfg: &WindowConfig) -> Result<Cohort> {
    if let Some(e) = cohort.entities.iter().find(|e| !cfg.times.contains_key(*e)) {
        return Err(Error::MissingReferenceTime(e.to_string()));
    }
    Cohort::new(
        cohort.label.clone(),
        cohort.entities.clone(),
        window_extract(&cohort.events, cfg)?,
    )
}
