//! Frequent TIRP enumeration.
//!
//! Mining runs in two steps. The first indexes every ordered interval pair
//! of each entity by (symbol, relation, symbol) and keeps the frequent
//! 2-patterns. The second grows each frequent pattern by one later interval at
//! a time: the relation from the pattern's last interval fixes a row of the
//! composition table, which bounds the relations allowed from every earlier
//! interval; surviving candidates are counted exactly from the instances.
//! Each first-level subtree is grown independently in parallel and the
//! results are sorted at the end, so output never depends on scheduling.

mod bruteforce;
mod data;
mod instances;
mod recount;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bruteforce::{enumerate_bruteforce, OracleLimits};
pub use instances::MAX_PATTERN_LEN;
pub use recount::{presence, support, Presence};

use crate::error::{Error, Result};
use crate::model::EntityIntervals;
use crate::relations::{table_for, Relation, RelationConfig};
use crate::tirp::{SupportStats, Tirp};

use data::Prepared;
use instances::{decode_column, scan_extensions, singleton_instances, Instances, PairSet, Prune};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    /// Minimum horizontal support, in (0, 1].
    pub min_support: f64,
    #[serde(flatten)]
    pub relation: RelationConfig,
    /// Longest pattern emitted.
    pub max_pattern_len: usize,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            min_support: 0.10,
            relation: RelationConfig::default(),
            max_pattern_len: 5,
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return Err(Error::Config(format!("min support {} must be in (0, 1]", self.min_support)));
        }
        if self.max_pattern_len == 0 || self.max_pattern_len > MAX_PATTERN_LEN {
            return Err(Error::Config(format!(
                "max pattern length {} must be in 1..={MAX_PATTERN_LEN}",
                self.max_pattern_len
            )));
        }
        self.relation.validate()
    }

    /// Whether `entities` supporting entities out of `cohort_size` is frequent.
    pub fn is_frequent(&self, entities: usize, cohort_size: usize) -> bool {
        entities > 0 && entities as f64 / cohort_size as f64 >= self.min_support
    }
}

/// A frequent TIRP with its support in the mined cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct MinedPattern {
    pub tirp: Tirp,
    pub stats: SupportStats,
}

/// Pattern in id space while mining.
struct Node {
    symbols: Vec<u32>,
    relations: Vec<Relation>,
    entities: usize,
    instances: usize,
}

/// Every TIRP with `1 <= k <= max_pattern_len` and horizontal support at least
/// `min_support`, sorted by (k, symbols, half-matrix).
///
/// `cohort_size` counts all entities of the cohort, including those without
/// intervals; it must be at least `entities.len()`.
pub fn mine(entities: &[EntityIntervals], cohort_size: usize, cfg: &MinerConfig) -> Result<Vec<MinedPattern>> {
    cfg.validate()?;
    if cohort_size < entities.len() {
        return Err(Error::Config(format!(
            "cohort size {cohort_size} is smaller than the {} entities given",
            entities.len()
        )));
    }
    if cohort_size == 0 {
        return Ok(Vec::new());
    }
    let data = Prepared::new(entities, []);
    let rel_cfg = &cfg.relation;
    let table = table_for(rel_cfg);

    let singles = singleton_instances(&data);
    let frequent_syms: Vec<u32> = (0..data.symbols.len() as u32)
        .filter(|&s| cfg.is_frequent(singles[s as usize].entity_count(), cohort_size))
        .collect();
    let mut nodes: Vec<Node> = frequent_syms
        .iter()
        .map(|&s| Node {
            symbols: vec![s],
            relations: Vec::new(),
            entities: singles[s as usize].entity_count(),
            instances: singles[s as usize].instance_count(),
        })
        .collect();

    if cfg.max_pattern_len >= 2 {
        let is_frequent_sym = {
            let mut v = vec![false; data.symbols.len()];
            for &s in &frequent_syms {
                v[s as usize] = true;
            }
            v
        };
        // Pair index, one scan per frequent first symbol.
        let pair_lists: Vec<Vec<(u32, Relation, u32, Instances)>> = frequent_syms
            .par_iter()
            .map(|&s| {
                let ext = scan_extensions(&data, &singles[s as usize], rel_cfg, None, |sym, _| {
                    is_frequent_sym[sym as usize]
                });
                ext.into_iter()
                    .filter(|(_, inst)| cfg.is_frequent(inst.entity_count(), cohort_size))
                    .map(|((b, code), inst)| (s, decode_column(code, 1)[0], b, inst))
                    .collect()
            })
            .collect();
        let mut pairs = PairSet::new(data.symbols.len());
        let mut seeds: Vec<(u32, Relation, u32, Instances)> = pair_lists.into_iter().flatten().collect();
        seeds.sort_by_key(|(a, r, b, _)| (*a, *b, *r));
        for (a, r, b, _) in &seeds {
            pairs.insert(*a, *r, *b);
        }

        let grown: Vec<Vec<Node>> = seeds
            .into_par_iter()
            .map(|(a, r, b, inst)| {
                let mut out = Vec::new();
                let node = Node {
                    symbols: vec![a, b],
                    relations: vec![r],
                    entities: inst.entity_count(),
                    instances: inst.instance_count(),
                };
                grow(&data, cfg, cohort_size, table, &pairs, &node, &inst, &mut out);
                out.push(node);
                out
            })
            .collect();
        nodes.extend(grown.into_iter().flatten());
    }

    let mut out: Vec<MinedPattern> = nodes
        .into_iter()
        .map(|n| {
            let symbols = n.symbols.iter().map(|&s| data.symbols[s as usize].clone()).collect();
            MinedPattern {
                tirp: Tirp::new(symbols, n.relations).expect("well-formed pattern"),
                stats: SupportStats::new(n.entities, n.instances, cohort_size),
            }
        })
        .collect();
    out.sort_by(|a, b| a.tirp.cmp(&b.tirp));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    data: &Prepared,
    cfg: &MinerConfig,
    cohort_size: usize,
    table: &[[crate::relations::RelationSet; 7]; 7],
    pairs: &PairSet,
    node: &Node,
    instances: &Instances,
    out: &mut Vec<Node>,
) {
    let k = node.symbols.len();
    if k >= cfg.max_pattern_len {
        return;
    }
    let last_column: Vec<Relation> = (0..k - 1)
        .map(|i| node.relations[crate::tirp::half_matrix_index(k, i, k - 1)])
        .collect();
    let prune = Prune {
        table,
        parent_last_column: &last_column,
        parent_symbols: &node.symbols,
        pairs: Some(pairs),
    };
    let ext = scan_extensions(data, instances, &cfg.relation, Some(&prune), |_, _| true);
    let mut children: Vec<((u32, u64), Instances)> = ext
        .into_iter()
        .filter(|(_, inst)| cfg.is_frequent(inst.entity_count(), cohort_size))
        .collect();
    children.sort_by_key(|(key, _)| *key);
    for ((sym, code), inst) in children {
        let column = decode_column(code, k);
        let mut relations = Vec::with_capacity(node.relations.len() + k);
        for i in 0..k {
            for j in i + 1..k {
                relations.push(node.relations[crate::tirp::half_matrix_index(k, i, j)]);
            }
            relations.push(column[i]);
        }
        let mut symbols = node.symbols.clone();
        symbols.push(sym);
        let child = Node {
            symbols,
            relations,
            entities: inst.entity_count(),
            instances: inst.instance_count(),
        };
        grow(data, cfg, cohort_size, table, pairs, &child, &inst, out);
        out.push(child);
    }
}
