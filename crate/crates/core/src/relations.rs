//! The seven temporal relations possible between lexicographically ordered
//! intervals, with epsilon flexibility and a bounded `before` gap, plus their
//! composition table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Time;

/// Relation between intervals `A <= B` under (start, end) order.
///
/// Declaration order is the order used for sorting half-matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Relation {
    Before = 0,
    Meets = 1,
    Overlaps = 2,
    FinishedBy = 3,
    Contains = 4,
    Starts = 5,
    Equals = 6,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::Before,
        Relation::Meets,
        Relation::Overlaps,
        Relation::FinishedBy,
        Relation::Contains,
        Relation::Starts,
        Relation::Equals,
    ];

    pub fn code(self) -> char {
        match self {
            Relation::Before => '<',
            Relation::Meets => 'm',
            Relation::Overlaps => 'o',
            Relation::FinishedBy => 'f',
            Relation::Contains => 'c',
            Relation::Starts => 's',
            Relation::Equals => '=',
        }
    }

    pub fn from_code(c: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| c.len() == 1 && c.starts_with(r.code()))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Relation {
        Relation::ALL[i]
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationConfig {
    /// Endpoint differences up to this many minutes count as equal.
    pub epsilon: Time,
    /// Largest gap, in minutes, still classified as `before`.
    pub max_gap: Time,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig {
            epsilon: 0,
            max_gap: 720,
        }
    }
}

impl RelationConfig {
    pub fn new(epsilon: Time, max_gap: Time) -> Result<Self> {
        let cfg = RelationConfig { epsilon, max_gap };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon < 0 {
            return Err(Error::Config(format!("epsilon {} must be >= 0", self.epsilon)));
        }
        if self.max_gap <= 0 {
            return Err(Error::Config(format!("max gap {} must be positive", self.max_gap)));
        }
        if self.epsilon >= self.max_gap {
            return Err(Error::Config(format!(
                "epsilon {} must be below max gap {}",
                self.epsilon, self.max_gap
            )));
        }
        Ok(())
    }
}

/// Classifies the pair `A = [a_start, a_end]`, `B = [b_start, b_end]` with
/// `A <= B` lexicographically.
///
/// Clauses are tried in the order equals, starts, finished-by, contains,
/// overlaps, meets, before. Returns `None` when the gap exceeds `max_gap` or,
/// with `epsilon > 0`, when no clause applies.
#[inline]
pub fn classify(a: (Time, Time), b: (Time, Time), cfg: &RelationConfig) -> Option<Relation> {
    let ((a_s, a_e), (b_s, b_e)) = (a, b);
    debug_assert!(a <= b, "classify requires A <= B, got {a:?} and {b:?}");
    let eps = cfg.epsilon;
    let near = |x: Time, y: Time| (x - y).abs() <= eps;
    if near(a_s, b_s) {
        if near(a_e, b_e) {
            return Some(Relation::Equals);
        }
        if a_e < b_e - eps {
            return Some(Relation::Starts);
        }
    }
    let starts_before = a_s < b_s - eps;
    if near(a_e, b_e) && starts_before {
        return Some(Relation::FinishedBy);
    }
    if starts_before && b_e < a_e - eps {
        return Some(Relation::Contains);
    }
    if starts_before && b_s < a_e - eps && a_e < b_e - eps {
        return Some(Relation::Overlaps);
    }
    if near(a_e, b_s) {
        return Some(Relation::Meets);
    }
    let gap = b_s - a_e;
    if gap > eps && gap <= cfg.max_gap {
        return Some(Relation::Before);
    }
    None
}

/// A set of relations as a bitmask over [`Relation::index`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RelationSet(pub u8);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);
    pub const FULL: RelationSet = RelationSet(0x7f);

    pub fn contains(self, r: Relation) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn insert(&mut self, r: Relation) {
        self.0 |= 1 << r.index();
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Relation> {
        Relation::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

impl FromIterator<Relation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = Relation>>(iter: I) -> Self {
        let mut s = RelationSet::EMPTY;
        for r in iter {
            s.insert(r);
        }
        s
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for r in self.iter() {
            write!(f, "{}", r.code())?;
        }
        f.write_str("}")
    }
}

const B: u8 = 1 << 0;
const M: u8 = 1 << 1;
const O: u8 = 1 << 2;
const F: u8 = 1 << 3;
const C: u8 = 1 << 4;
const S: u8 = 1 << 5;
const E: u8 = 1 << 6;

// Rows are rel(A, B), columns rel(B, C), cells the possible rel(A, C) for
// A <= B <= C. Generated by exhaustive enumeration of integer intervals
// (point intervals included) and checked against it in the tests below.
const EXACT: [[RelationSet; 7]; 7] = [
    // <
    [RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B)],
    // m
    [RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(M), RelationSet(M)],
    // o
    [RelationSet(B), RelationSet(B), RelationSet(B | M | O), RelationSet(B | M | O), RelationSet(B | M | O | F | C), RelationSet(O), RelationSet(O)],
    // f
    [RelationSet(B), RelationSet(M), RelationSet(O), RelationSet(F), RelationSet(C), RelationSet(M | O), RelationSet(F)],
    // c
    [RelationSet(B | M | O | F | C), RelationSet(O | F | C), RelationSet(O | F | C), RelationSet(C), RelationSet(C), RelationSet(O | F | C), RelationSet(C)],
    // s
    [RelationSet(B), RelationSet(B), RelationSet(B | M | O), RelationSet(B | M | O), RelationSet(B | M | O | F | C), RelationSet(S), RelationSet(S)],
    // =
    [RelationSet(B), RelationSet(M), RelationSet(O), RelationSet(F), RelationSet(C), RelationSet(S), RelationSet(E)],
];
const WIDENED: [[RelationSet; 7]; 7] = [
    // <
    [RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B), RelationSet(B)],
    // m
    [RelationSet(B), RelationSet(B | M), RelationSet(B | M), RelationSet(B | M | F), RelationSet(B | M | F), RelationSet(B | M), RelationSet(B | M | F)],
    // o
    [RelationSet(B), RelationSet(B | M), RelationSet(B | M | O), RelationSet(B | M | O | F), RelationSet(B | M | O | F | C), RelationSet(M | O), RelationSet(M | O | F)],
    // f
    [RelationSet(B | M | F), RelationSet(B | M | O | F), RelationSet(M | O | F), RelationSet(B | M | O | F | C), RelationSet(F | C), RelationSet(B | M | O | F), RelationSet(B | M | O | F | C)],
    // c
    [RelationSet(B | M | O | F | C), RelationSet(M | O | F | C), RelationSet(O | F | C), RelationSet(F | C), RelationSet(C), RelationSet(M | O | F | C), RelationSet(F | C)],
    // s
    [RelationSet(B), RelationSet(B | M), RelationSet(B | M | O), RelationSet(B | M | O | F), RelationSet(B | M | O | F | C), RelationSet(B | M | O | S), RelationSet(B | M | O | F | S | E)],
    // =
    [RelationSet(B | M | F), RelationSet(B | M | O | F), RelationSet(M | O | F), RelationSet(B | M | O | F | C), RelationSet(F | C), RelationSet(B | M | O | F | S | E), RelationSet(B | M | O | F | C | S | E)],
];

/// Composition table at epsilon 0.
pub fn transitivity_table() -> &'static [[RelationSet; 7]; 7] {
    &EXACT
}

/// Composition table covering every positive epsilon, unioned with the exact
/// table. Used for pruning when `epsilon > 0`.
pub fn widened_transitivity_table() -> &'static [[RelationSet; 7]; 7] {
    &WIDENED
}

/// Possible relations between A and C given `rel(A, B)` and `rel(B, C)`.
pub fn compose(ab: Relation, bc: Relation) -> RelationSet {
    EXACT[ab.index()][bc.index()]
}

/// [`compose`], widened when `epsilon > 0`.
pub fn compose_with(ab: Relation, bc: Relation, cfg: &RelationConfig) -> RelationSet {
    table_for(cfg)[ab.index()][bc.index()]
}

pub fn table_for(cfg: &RelationConfig) -> &'static [[RelationSet; 7]; 7] {
    if cfg.epsilon == 0 {
        &EXACT
    } else {
        &WIDENED
    }
}
