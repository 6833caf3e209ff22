//! Exact support of given TIRPs, without mining.
//!
//! The requested patterns are arranged in a prefix trie and their instances
//! are grown along it, so a prefix shared by many patterns is matched once.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::model::EntityIntervals;
use crate::relations::RelationConfig;
use crate::tirp::{SupportStats, Tirp};

use super::data::Prepared;
use super::instances::{encode_column, scan_extensions, singleton_instances, ColumnCode, Instances};

/// Where a TIRP occurs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Presence {
    /// Indices (into the entity slice) of entities with at least one instance,
    /// ascending.
    pub entities: Vec<usize>,
    pub instances: usize,
}

impl Presence {
    fn from_instances(inst: &Instances) -> Self {
        Presence {
            entities: inst.per_entity.iter().map(|(e, _)| *e as usize).collect(),
            instances: inst.instance_count(),
        }
    }

    pub fn contains(&self, entity: usize) -> bool {
        self.entities.binary_search(&entity).is_ok()
    }
}

#[derive(Default)]
struct TrieNode {
    children: HashMap<(u32, ColumnCode), usize>,
    targets: Vec<usize>,
}

/// Presence of every TIRP in `tirps` among `entities`.
pub fn presence(tirps: &[Tirp], entities: &[EntityIntervals], cfg: &RelationConfig) -> Vec<Presence> {
    let data = Prepared::new(entities, tirps.iter().flat_map(|t| t.symbols()));
    let mut nodes = vec![TrieNode::default()];
    for (target, tirp) in tirps.iter().enumerate() {
        let mut at = 0;
        for m in 0..tirp.k() {
            let sym = data.symbol_id(&tirp.symbols()[m]).expect("interned");
            let column: Vec<_> = (0..m).map(|i| tirp.relation(i, m)).collect();
            let key = (sym, encode_column(&column));
            at = match nodes[at].children.get(&key) {
                Some(&next) => next,
                None => {
                    nodes.push(TrieNode::default());
                    let next = nodes.len() - 1;
                    nodes[at].children.insert(key, next);
                    next
                }
            };
        }
        nodes[at].targets.push(target);
    }

    let singles = singleton_instances(&data);
    let mut roots: Vec<(u32, usize)> = nodes[0].children.iter().map(|(&(s, _), &n)| (s, n)).collect();
    roots.sort_unstable();
    let found: Vec<Vec<(usize, Presence)>> = roots
        .par_iter()
        .map(|&(sym, node)| {
            let mut out = Vec::new();
            walk(&data, cfg, &nodes, node, &singles[sym as usize], &mut out);
            out
        })
        .collect();

    let mut result = vec![Presence::default(); tirps.len()];
    for (target, p) in found.into_iter().flatten() {
        result[target] = p;
    }
    result
}

fn walk(
    data: &Prepared,
    cfg: &RelationConfig,
    nodes: &[TrieNode],
    node: usize,
    inst: &Instances,
    out: &mut Vec<(usize, Presence)>,
) {
    let here = &nodes[node];
    if !here.targets.is_empty() {
        let p = Presence::from_instances(inst);
        out.extend(here.targets.iter().map(|&t| (t, p.clone())));
    }
    if here.children.is_empty() || inst.per_entity.is_empty() {
        return;
    }
    let ext = scan_extensions(data, inst, cfg, None, |sym, code| here.children.contains_key(&(sym, code)));
    let mut ext: Vec<_> = ext.into_iter().collect();
    ext.sort_by_key(|(key, _)| *key);
    for (key, child_inst) in ext {
        walk(data, cfg, nodes, here.children[&key], &child_inst, out);
    }
}

/// Entity-level support of one TIRP; an entity counts once however many
/// instances it holds.
pub fn support(tirp: &Tirp, entities: &[EntityIntervals], cohort_size: usize, cfg: &RelationConfig) -> SupportStats {
    let p = presence(std::slice::from_ref(tirp), entities, cfg).remove(0);
    SupportStats::new(p.entities.len(), p.instances, cohort_size)
}
