//! Temporal abstraction and time-interval pattern mining for labeled cohorts.
//!
//! The pipeline turns raw time-stamped measurements into State and Gradient
//! intervals ([`kbta`]), mines frequent time-interval relation patterns per
//! cohort ([`miner`]), and compares the cohorts' patterns statistically
//! ([`stats`]). [`synth`] generates labeled cohorts with planted patterns.

pub mod error;
pub mod io;
pub mod kb;
pub mod kbta;
pub mod miner;
pub mod model;
pub mod output;
pub mod relations;
pub mod stats;
pub mod synth;
pub mod tirp;
pub mod window;

pub use error::{Error, Result};
pub use kb::{AbstractionRule, KnowledgeBase};
pub use miner::{enumerate_bruteforce, mine, presence, support, MinedPattern, MinerConfig, Presence};
pub use model::{Cohort, EntityId, EntityIntervals, Kind, Sample, Symbol, SymbolResolver, SymbolicInterval, Time};
pub use relations::{classify, compose, transitivity_table, Relation, RelationConfig, RelationSet};
pub use stats::{compare_cohorts, CohortComparison, CohortComparisonReport, CohortData, KsDomain, StatsConfig};
pub use tirp::{SupportStats, Tirp};
pub use window::{window_extract, WindowConfig};
