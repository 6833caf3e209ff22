//! Statistics for comparing the patterns of two classes.

pub mod compare;
pub mod ig;
pub mod ks;
pub mod proportion;
pub mod scores;

pub use compare::{
    class_split_seed, compare_cohorts, percent, split_halves, within_class_tests, CohortComparison, CohortComparisonReport, CohortData, ClassSummary, KsBlock, KsDomain,
    ProportionRow, RankedPattern, StatsConfig,
};
pub use ig::{entropy, information_gain, information_gain_counts};
pub use ks::{ks_coefficient, ks_critical_d, ks_statistic, ks_two_sample, KsResult};
pub use proportion::{proportion_test, proportion_z, z_critical, ProportionTestResult};
pub use scores::{qsofa_score, sirs_score, Score};
