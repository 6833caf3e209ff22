//! Time-interval relation patterns.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Symbol, SymbolResolver};
use crate::relations::{table_for, Relation, RelationConfig};

/// `k` symbols in instance order plus the upper-triangular half-matrix of
/// pairwise relations, flattened row-major: (0,1), (0,2), .., (0,k-1), (1,2), ..
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tirp {
    symbols: Vec<Symbol>,
    relations: Vec<Relation>,
}

/// Index of entry (i, j), i < j, in a row-major half-matrix of size k.
pub fn half_matrix_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

impl Tirp {
    pub fn new(symbols: Vec<Symbol>, relations: Vec<Relation>) -> Result<Self> {
        let k = symbols.len();
        if k == 0 {
            return Err(Error::Tirp {
                text: String::new(),
                message: "a TIRP needs at least one symbol".into(),
            });
        }
        if relations.len() != k * (k - 1) / 2 {
            return Err(Error::Tirp {
                text: String::new(),
                message: format!("{k} symbols need {} relations, got {}", k * (k - 1) / 2, relations.len()),
            });
        }
        Ok(Tirp { symbols, relations })
    }

    pub fn singleton(symbol: Symbol) -> Self {
        Tirp {
            symbols: vec![symbol],
            relations: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, i: usize, j: usize) -> Relation {
        self.relations[half_matrix_index(self.k(), i, j)]
    }

    /// Relations from each earlier interval to the last one.
    pub fn last_column(&self) -> Vec<Relation> {
        let k = self.k();
        (0..k.saturating_sub(1)).map(|i| self.relation(i, k - 1)).collect()
    }

    /// Appends an interval with the given relations from each existing one.
    pub fn extend(&self, symbol: Symbol, column: &[Relation]) -> Tirp {
        let k = self.k();
        assert_eq!(column.len(), k, "extension needs one relation per existing symbol");
        let mut relations = Vec::with_capacity((k + 1) * k / 2);
        for i in 0..k {
            for j in i + 1..k {
                relations.push(self.relation(i, j));
            }
            relations.push(column[i]);
        }
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        Tirp { symbols, relations }
    }

    /// Drops the last symbol and its relation column; `None` for k = 1.
    pub fn prefix(&self) -> Option<Tirp> {
        let k = self.k();
        if k == 1 {
            return None;
        }
        let mut relations = Vec::with_capacity((k - 1) * (k - 2) / 2);
        for i in 0..k - 1 {
            for j in i + 1..k - 1 {
                relations.push(self.relation(i, j));
            }
        }
        Some(Tirp {
            symbols: self.symbols[..k - 1].to_vec(),
            relations,
        })
    }

    /// Checks `rel(i, l)` against the composition of `rel(i, j)` and `rel(j, l)`
    /// for every i < j < l. Returns the first violating triple.
    pub fn consistency_violation(&self, cfg: &RelationConfig) -> Option<(usize, usize, usize)> {
        let table = table_for(cfg);
        let k = self.k();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let allowed = table[self.relation(i, j).index()][self.relation(j, l).index()];
                    if !allowed.contains(self.relation(i, l)) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    /// `Concept.Kind.Label|..;r,r,..`
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, resolver: SymbolResolver<'_>) -> Result<Tirp> {
        let err = |message: String| Error::Tirp {
            text: text.to_string(),
            message,
        };
        let (syms, rels) = text.split_once(';').ok_or_else(|| err("missing `;`".into()))?;
        let symbols = syms
            .split('|')
            .map(|s| resolver.parse(s))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(err)?;
        let relations = if rels.is_empty() {
            Vec::new()
        } else {
            rels.split(',')
                .map(|c| Relation::from_code(c).ok_or_else(|| err(format!("unknown relation code {c:?}"))))
                .collect::<Result<Vec<_>>>()?
        };
        Tirp::new(symbols, relations).map_err(|e| match e {
            Error::Tirp { message, .. } => err(message),
            other => other,
        })
    }
}

impl fmt::Display for Tirp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(";")?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", r.code())?;
        }
        Ok(())
    }
}

/// Output order: size, then symbol sequence, then half-matrix.
impl Ord for Tirp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k()
            .cmp(&other.k())
            .then_with(|| self.symbols.cmp(&other.symbols))
            .then_with(|| self.relations.cmp(&other.relations))
    }
}

impl PartialOrd for Tirp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Entity-level (horizontal) support of a TIRP within one cohort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportStats {
    pub supporting_entities: usize,
    pub horizontal_support: f64,
    pub total_instances: usize,
}

impl SupportStats {
    pub fn new(supporting_entities: usize, total_instances: usize, cohort_size: usize) -> Self {
        let horizontal_support = if cohort_size == 0 {
            0.0
        } else {
            supporting_entities as f64 / cohort_size as f64
        };
        SupportStats {
            supporting_entities,
            horizontal_support,
            total_instances,
        }
    }
}
