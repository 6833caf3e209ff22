//! Instance lists and the extension scan shared by mining and recounting.

use std::collections::HashMap;

use crate::relations::{classify, Relation, RelationConfig, RelationSet};

use super::data::Prepared;

/// Instances of one pattern of size `k`: per supporting entity, the flattened
/// index tuples into that entity's interval array.
#[derive(Debug, Clone, Default)]
pub(crate) struct Instances {
    pub k: usize,
    pub per_entity: Vec<(u32, Vec<u32>)>,
}

impl Instances {
    pub fn new(k: usize) -> Self {
        Instances {
            k,
            per_entity: Vec::new(),
        }
    }

    pub fn push(&mut self, entity: u32, tuple: &[u32], last: u32) {
        match self.per_entity.last_mut() {
            Some((e, flat)) if *e == entity => {
                flat.extend_from_slice(tuple);
                flat.push(last);
            }
            _ => {
                let mut flat = Vec::with_capacity(self.k);
                flat.extend_from_slice(tuple);
                flat.push(last);
                self.per_entity.push((entity, flat));
            }
        }
    }

    pub fn entity_count(&self) -> usize {
        self.per_entity.len()
    }

    pub fn instance_count(&self) -> usize {
        self.per_entity.iter().map(|(_, f)| f.len() / self.k).sum()
    }
}

/// Frequent 2-patterns as a dense bitmap over (first symbol, relation, second symbol).
#[derive(Debug, Clone)]
pub(crate) struct PairSet {
    n: usize,
    bits: Vec<bool>,
}

impl PairSet {
    pub fn new(n_symbols: usize) -> Self {
        PairSet {
            n: n_symbols,
            bits: vec![false; n_symbols * n_symbols * 7],
        }
    }

    fn slot(&self, a: u32, r: Relation, b: u32) -> usize {
        (a as usize * self.n + b as usize) * 7 + r.index()
    }

    pub fn insert(&mut self, a: u32, r: Relation, b: u32) {
        let s = self.slot(a, r, b);
        self.bits[s] = true;
    }

    pub fn contains(&self, a: u32, r: Relation, b: u32) -> bool {
        self.bits[self.slot(a, r, b)]
    }
}

/// Longest pattern whose relation column fits in a [`ColumnCode`].
pub const MAX_PATTERN_LEN: usize = 22;

/// Relations of the new interval to each existing one, 3 bits each.
pub(crate) type ColumnCode = u64;

pub(crate) fn encode_column(column: &[Relation]) -> ColumnCode {
    column
        .iter()
        .enumerate()
        .fold(0, |acc, (i, r)| acc | ((r.index() as u64) << (3 * i)))
}

pub(crate) fn decode_column(code: ColumnCode, len: usize) -> Vec<Relation> {
    (0..len)
        .map(|i| Relation::from_index(((code >> (3 * i)) & 7) as usize))
        .collect()
}

/// Pruning applied while growing a mined pattern.
pub(crate) struct Prune<'a> {
    /// Composition table for the configured epsilon.
    pub table: &'a [[RelationSet; 7]; 7],
    /// rel(i, k-1) of the parent pattern for i < k-1.
    pub parent_last_column: &'a [Relation],
    /// Symbols of the parent pattern.
    pub parent_symbols: &'a [u32],
    /// Frequent 2-patterns; `None` while they are being computed.
    pub pairs: Option<&'a PairSet>,
}

pub(crate) type Extensions = HashMap<(u32, ColumnCode), Instances>;

/// Extends every instance of a size-`k` pattern by one later interval and
/// buckets the results by (new symbol, relation column).
///
/// `accept` filters buckets before any instance is stored.
pub(crate) fn scan_extensions(
    data: &Prepared,
    instances: &Instances,
    cfg: &RelationConfig,
    prune: Option<&Prune<'_>>,
    accept: impl Fn(u32, ColumnCode) -> bool,
) -> Extensions {
    let k = instances.k;
    let mut out: Extensions = HashMap::new();
    let mut column = vec![Relation::Before; k];
    for (entity, flat) in &instances.per_entity {
        let ivs = &data.entities[*entity as usize];
        for tuple in flat.chunks_exact(k) {
            let last = ivs[tuple[k - 1] as usize];
            'candidate: for j in tuple[k - 1] as usize + 1..ivs.len() {
                let new = ivs[j];
                if new.start - last.end > cfg.max_gap {
                    break;
                }
                let Some(r_last) = classify(last.span(), new.span(), cfg) else {
                    continue;
                };
                if let Some(p) = prune {
                    if p.pairs.is_some_and(|pairs| !pairs.contains(last.sym, r_last, new.sym)) {
                        continue;
                    }
                }
                column[k - 1] = r_last;
                for i in 0..k - 1 {
                    let earlier = ivs[tuple[i] as usize];
                    let Some(r) = classify(earlier.span(), new.span(), cfg) else {
                        continue 'candidate;
                    };
                    if let Some(p) = prune {
                        let allowed = p.table[p.parent_last_column[i].index()][r_last.index()];
                        debug_assert!(allowed.contains(r), "composition table misses an observed relation");
                        if !allowed.contains(r) {
                            continue 'candidate;
                        }
                        if p.pairs.is_some_and(|pairs| !pairs.contains(p.parent_symbols[i], r, new.sym)) {
                            continue 'candidate;
                        }
                    }
                    column[i] = r;
                }
                let code = encode_column(&column);
                if !accept(new.sym, code) {
                    continue;
                }
                out.entry((new.sym, code))
                    .or_insert_with(|| Instances::new(k + 1))
                    .push(*entity, tuple, j as u32);
            }
        }
    }
    out
}

/// Size-1 instances of every symbol.
pub(crate) fn singleton_instances(data: &Prepared) -> Vec<Instances> {
    let mut out: Vec<Instances> = (0..data.symbols.len()).map(|_| Instances::new(1)).collect();
    for (e, ivs) in data.entities.iter().enumerate() {
        for (i, iv) in ivs.iter().enumerate() {
            out[iv.sym as usize].push(e as u32, &[], i as u32);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_codes_round_trip() {
        let col: Vec<Relation> = (0..MAX_PATTERN_LEN - 1).map(|i| Relation::from_index(i % 7)).collect();
        assert_eq!(decode_column(encode_column(&col), col.len()), col);
        const { assert!(3 * (MAX_PATTERN_LEN - 1) <= 64) };
    }
}
