//! Exhaustive reference enumeration, used to check the miner.
//!
//! Every strictly increasing tuple of interval indices is classified pair by
//! pair; no pruning and no composition table are involved.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::EntityIntervals;
use crate::relations::classify;
use crate::tirp::{SupportStats, Tirp};

use super::{MinedPattern, MinerConfig};

/// Input sizes accepted by [`enumerate_bruteforce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_entities: usize,
    pub max_intervals: usize,
    pub max_pattern_len: usize,
}

impl OracleLimits {
    pub const DEFAULT: OracleLimits = OracleLimits {
        max_entities: 20,
        max_intervals: 12,
        max_pattern_len: 4,
    };
}

pub fn enumerate_bruteforce(
    entities: &[EntityIntervals],
    cohort_size: usize,
    cfg: &MinerConfig,
) -> Result<Vec<MinedPattern>> {
    let limits = OracleLimits::DEFAULT;
    cfg.validate()?;
    if entities.len() > limits.max_entities {
        return Err(Error::OracleLimit(format!(
            "{} entities (limit {})",
            entities.len(),
            limits.max_entities
        )));
    }
    if let Some(e) = entities.iter().find(|e| e.intervals.len() > limits.max_intervals) {
        return Err(Error::OracleLimit(format!(
            "entity {:?} has {} intervals (limit {})",
            e.entity,
            e.intervals.len(),
            limits.max_intervals
        )));
    }
    if cfg.max_pattern_len > limits.max_pattern_len {
        return Err(Error::OracleLimit(format!(
            "pattern length {} (limit {})",
            cfg.max_pattern_len, limits.max_pattern_len
        )));
    }
    if cohort_size < entities.len() {
        return Err(Error::Config("cohort size smaller than entity count".into()));
    }

    // TIRP -> (last entity seen, supporting entities, instances)
    let mut counts: BTreeMap<Tirp, (usize, usize, usize)> = BTreeMap::new();
    for (e, ent) in entities.iter().enumerate() {
        let ivs = &ent.intervals;
        let mut tuple = Vec::new();
        visit(ivs.len(), cfg.max_pattern_len, 0, &mut tuple, &mut |tuple| {
            let mut relations = Vec::new();
            for (x, &i) in tuple.iter().enumerate() {
                for &j in &tuple[x + 1..] {
                    let (a, b) = (&ivs[i], &ivs[j]);
                    match classify((a.start, a.end), (b.start, b.end), &cfg.relation) {
                        Some(r) => relations.push(r),
                        None => return,
                    }
                }
            }
            let symbols = tuple.iter().map(|&i| ivs[i].symbol.clone()).collect();
            let tirp = Tirp::new(symbols, relations).expect("well-formed");
            let c = counts.entry(tirp).or_insert((usize::MAX, 0, 0));
            if c.0 != e {
                c.0 = e;
                c.1 += 1;
            }
            c.2 += 1;
        });
    }
    Ok(counts
        .into_iter()
        .filter(|(_, (_, ents, _))| cfg.is_frequent(*ents, cohort_size))
        .map(|(tirp, (_, ents, inst))| MinedPattern {
            tirp,
            stats: SupportStats::new(ents, inst, cohort_size),
        })
        .collect())
}

/// Calls `f` on every strictly increasing index tuple of length 1..=max_len.
fn visit(n: usize, max_len: usize, from: usize, tuple: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    for i in from..n {
        tuple.push(i);
        f(tuple);
        if tuple.len() < max_len {
            visit(n, max_len, i + 1, tuple, f);
        }
        tuple.pop();
    }
}

