//! Core value types shared by every stage of the pipeline.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;

/// Whole minutes from a per-dataset epoch.
pub type Time = i64;

/// Entity identifiers are opaque strings.
pub type EntityId = Arc<str>;

/// One time-stamped numeric measurement of a clinical concept.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub entity: EntityId,
    pub concept: Arc<str>,
    pub t: Time,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    State,
    Gradient,
}

impl Kind {
    pub fn code(self) -> &'static str {
        match self {
            Kind::State => "S",
            Kind::Gradient => "G",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::State => "State",
            Kind::Gradient => "Gradient",
        }
    }

    /// Accepts either the one-letter code or the full name.
    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "S" | "State" | "state" => Some(Kind::State),
            "G" | "Gradient" | "gradient" => Some(Kind::Gradient),
            _ => None,
        }
    }

    pub fn default_labels(self) -> [&'static str; 3] {
        match self {
            Kind::State => ["Low", "Normal", "High"],
            Kind::Gradient => ["Decreasing", "Stable", "Increasing"],
        }
    }
}

/// Rank given to labels whose declared position is unknown. They sort after
/// the three declared labels of their concept and kind.
pub const UNRANKED: u8 = 3;

/// Concept names end up inside canonical TIRP strings, so the separators used
/// there are not allowed.
pub fn validate_concept_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() {
        return Err("empty concept name".into());
    }
    if let Some(c) = name
        .chars()
        .find(|c| matches!(c, '.' | '|' | ';' | ',') || c.is_whitespace())
    {
        return Err(format!("concept {name:?} contains reserved character {c:?}"));
    }
    Ok(())
}

/// An abstraction symbol: concept x kind x label.
///
/// Ordering is by concept name, then kind (`State < Gradient`), then the
/// label's declared position. This order breaks ties between intervals with
/// identical endpoints and orders symbol sequences in mining output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    concept: Arc<str>,
    kind: Kind,
    rank: u8,
    label: Arc<str>,
}

impl Symbol {
    pub fn new(concept: impl Into<Arc<str>>, kind: Kind, rank: u8, label: impl Into<Arc<str>>) -> Self {
        Symbol {
            concept: concept.into(),
            kind,
            rank,
            label: label.into(),
        }
    }

    pub fn concept(&self) -> &str {
        &self.concept
    }

    pub fn concept_arc(&self) -> &Arc<str> {
        &self.concept
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.concept
            .cmp(&other.concept)
            .then(self.kind.cmp(&other.kind))
            .then(self.rank.cmp(&other.rank))
            .then_with(|| self.label.cmp(&other.label))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.concept, self.kind.code(), self.label)
    }
}

/// Builds [`Symbol`]s from text, recovering each label's declared rank.
///
/// Default label names resolve without a knowledge base. Custom state labels
/// (e.g. the GCS severities) need one; without it they are [`UNRANKED`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SymbolResolver<'a> {
    kb: Option<&'a KnowledgeBase>,
}

impl<'a> SymbolResolver<'a> {
    pub fn new(kb: Option<&'a KnowledgeBase>) -> Self {
        SymbolResolver { kb }
    }

    pub fn resolve(&self, concept: &str, kind: Kind, label: &str) -> Symbol {
        let declared = self
            .kb
            .and_then(|kb| kb.get(concept))
            .map(|rule| rule.labels(kind))
            .and_then(|labels| labels.iter().position(|l| *l == label));
        let rank = declared
            .or_else(|| kind.default_labels().iter().position(|l| *l == label))
            .map_or(UNRANKED, |p| p as u8);
        Symbol::new(concept, kind, rank, label)
    }

    /// Parses `Concept.Kind.Label`.
    pub fn parse(&self, text: &str) -> std::result::Result<Symbol, String> {
        let mut parts = text.splitn(3, '.');
        let (Some(concept), Some(kind), Some(label)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("symbol {text:?} is not Concept.Kind.Label"));
        };
        validate_concept_name(concept)?;
        let kind = Kind::parse(kind).ok_or_else(|| format!("unknown kind {kind:?} in {text:?}"))?;
        if label.is_empty() {
            return Err(format!("empty label in {text:?}"));
        }
        Ok(self.resolve(concept, kind, label))
    }
}

/// A symbol holding over the closed range `[start, end]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicInterval {
    pub symbol: Symbol,
    pub start: Time,
    pub end: Time,
}

impl SymbolicInterval {
    pub fn new(symbol: Symbol, start: Time, end: Time) -> Self {
        debug_assert!(start <= end, "interval [{start}, {end}] is reversed");
        SymbolicInterval { symbol, start, end }
    }
}

/// Lexicographic order: start, end, then symbol.
impl Ord for SymbolicInterval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.start
            .cmp(&other.start)
            .then(self.end.cmp(&other.end))
            .then_with(|| self.symbol.cmp(&other.symbol))
    }
}

impl PartialOrd for SymbolicInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All symbolic intervals of one entity, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityIntervals {
    pub entity: EntityId,
    pub intervals: Vec<SymbolicInterval>,
}

impl EntityIntervals {
    /// Sorts and removes exact duplicates.
    pub fn new(entity: EntityId, mut intervals: Vec<SymbolicInterval>) -> Self {
        intervals.sort();
        intervals.dedup();
        EntityIntervals { entity, intervals }
    }

    pub fn is_sorted(&self) -> bool {
        self.intervals.windows(2).all(|w| w[0] <= w[1])
    }
}

/// A labeled group of entities and their raw samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    pub label: String,
    pub entities: Vec<EntityId>,
    pub events: Vec<Sample>,
}

impl Cohort {
    pub fn new(label: impl Into<String>, mut entities: Vec<EntityId>, events: Vec<Sample>) -> Result<Self> {
        entities.sort();
        entities.dedup();
        if let Some(s) = events.iter().find(|s| entities.binary_search(&s.entity).is_err()) {
            return Err(Error::Config(format!(
                "sample for entity {:?} is not a member of the cohort",
                s.entity
            )));
        }
        Ok(Cohort {
            label: label.into(),
            entities,
            events,
        })
    }
}
