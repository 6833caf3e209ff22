//! Compact per-entity interval arrays with interned symbol ids.

use std::collections::BTreeSet;

use crate::model::{EntityIntervals, Symbol, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Iv {
    pub start: Time,
    pub end: Time,
    pub sym: u32,
}

impl Iv {
    pub fn span(&self) -> (Time, Time) {
        (self.start, self.end)
    }
}

/// Symbol ids follow symbol order, so sorting by id equals sorting by symbol.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub symbols: Vec<Symbol>,
    pub entities: Vec<Vec<Iv>>,
}

impl Prepared {
    pub fn new<'a>(entities: &[EntityIntervals], extra: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let mut set: BTreeSet<&Symbol> = extra.into_iter().collect();
        for e in entities {
            set.extend(e.intervals.iter().map(|iv| &iv.symbol));
        }
        let symbols: Vec<Symbol> = set.into_iter().cloned().collect();
        let entities = entities
            .iter()
            .map(|e| {
                debug_assert!(e.is_sorted(), "intervals of {:?} are not sorted", e.entity);
                e.intervals
                    .iter()
                    .map(|iv| Iv {
                        start: iv.start,
                        end: iv.end,
                        sym: symbols.binary_search(&iv.symbol).expect("interned") as u32,
                    })
                    .collect()
            })
            .collect();
        Prepared { symbols, entities }
    }

    pub fn symbol_id(&self, s: &Symbol) -> Option<u32> {
        self.symbols.binary_search(s).ok().map(|i| i as u32)
    }
}
