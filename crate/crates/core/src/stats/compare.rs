use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miner::{presence, MinedPattern, MinerConfig, Presence};
use crate::model::EntityIntervals;
use crate::tirp::Tirp;

use super::ig::information_gain_counts;
use super::ks::{ks_coefficient, ks_two_sample, KsResult};
use super::proportion::{proportion_test, z_critical, ProportionTestResult};

/// One class as input to [`compare_cohorts`].
#[derive(Debug, Clone, Copy)]
pub struct CohortData<'a> {
    pub label: &'a str,
    /// Interval sequences of the class members, in a fixed order.
    pub entities: &'a [EntityIntervals],
    /// Class size, counting members without intervals.
    pub cohort_size: usize,
    pub mined: &'a [MinedPattern],
    pub config: &'a MinerConfig,
}

/// Which TIRPs feed the two KS samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KsDomain {
    /// Supports of the TIRPs mined in both classes.
    #[default]
    Shared,
    /// Supports of every TIRP mined in either class, zero where not mined.
    Union,
}

impl std::str::FromStr for KsDomain {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "shared" => Ok(KsDomain::Shared),
            "union" => Ok(KsDomain::Union),
            other => Err(format!("unknown KS domain '{other}' (expected shared or union)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsConfig {
    pub alpha: f64,
    pub ks_domain: KsDomain,
    pub split_seed: u64,
    pub top_n: usize,
}

impl Default for StatsConfig {
    fn default() -> Self {
        StatsConfig { alpha: 0.05, ks_domain: KsDomain::Shared, split_seed: 0, top_n: 20 }
    }
}

impl StatsConfig {
    pub fn validate(&self) -> Result<()> {
        ks_coefficient(self.alpha)?;
        z_critical(self.alpha)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub label: String,
    pub cohort_size: usize,
    pub tirps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsBlock {
    pub domain: KsDomain,
    /// Absent when either sample is empty.
    pub result: Option<KsResult>,
}

/// One row of the proportion-test table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProportionRow {
    pub description: String,
    pub tested: usize,
    pub different: usize,
    pub percent: u32,
}

impl ProportionRow {
    fn new(description: String, results: &[ProportionTestResult]) -> Self {
        let tested = results.len();
        let different = results.iter().filter(|r| r.significant).count();
        ProportionRow { description, tested, different, percent: percent(different, tested) }
    }
}

/// `round(100 * different / tested)`, half away from zero; 0 when nothing was tested.
pub fn percent(different: usize, tested: usize) -> u32 {
    if tested == 0 {
        0
    } else {
        ((200 * different + tested) / (2 * tested)) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPattern {
    pub rank: usize,
    pub tirp: String,
    pub k: usize,
    pub information_gain: f64,
    pub entities_a: usize,
    pub entities_b: usize,
    pub support_a: f64,
    pub support_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortComparisonReport {
    pub miner_config: MinerConfig,
    pub stats_config: StatsConfig,
    pub class_a: ClassSummary,
    pub class_b: ClassSummary,
    pub total_distinct: usize,
    pub shared: usize,
    pub exclusive_a: usize,
    pub exclusive_b: usize,
    pub ks: KsBlock,
    /// Between classes, then the within-class splits of A and of B.
    pub proportion_tests: Vec<ProportionRow>,
    pub top_patterns: Vec<RankedPattern>,
}

/// Full per-TIRP results behind a report.
#[derive(Debug, Clone)]
pub struct CohortComparison {
    pub report: CohortComparisonReport,
    /// Shared TIRPs in canonical order with their between-class test.
    pub between: Vec<(Tirp, ProportionTestResult)>,
    /// TIRPs mined in A, tested between the two halves of A.
    pub within_a: Vec<(Tirp, ProportionTestResult)>,
    pub within_b: Vec<(Tirp, ProportionTestResult)>,
    /// Every distinct TIRP ranked by information gain.
    pub ranking: Vec<RankedPattern>,
}

fn validate_class(c: &CohortData<'_>) -> Result<()> {
    if c.cohort_size < c.entities.len() {
        return Err(Error::Config(format!(
            "class '{}': cohort size {} is smaller than its {} interval sequences",
            c.label,
            c.cohort_size,
            c.entities.len()
        )));
    }
    if c.cohort_size == 0 {
        return Err(Error::Config(format!("class '{}' is empty", c.label)));
    }
    if c.mined.windows(2).any(|w| w[0].tirp >= w[1].tirp) {
        return Err(Error::Config(format!("class '{}': mined TIRPs are not sorted and unique", c.label)));
    }
    Ok(())
}

fn support_map(mined: &[MinedPattern]) -> BTreeMap<&Tirp, &MinedPattern> {
    mined.iter().map(|p| (&p.tirp, p)).collect()
}

/// Split `0..n` in two by a seeded shuffle; the first half has `n / 2` members.
pub fn split_halves(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut second = order.split_off(n / 2);
    order.sort_unstable();
    second.sort_unstable();
    (order, second)
}

/// Seed for the split of the class at `class_index`. The mix keeps the split
/// stream apart from any generator seeded with the same value.
pub fn class_split_seed(split_seed: u64, class_index: u64) -> u64 {
    let mut z = split_seed ^ 0xD1B5_4A32_D192_ED03u64.wrapping_mul(class_index + 1);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Proportion tests between two random halves of one class, supports
/// recounted over each half for every TIRP mined in the class.
pub fn within_class_tests(class: &CohortData<'_>, seed: u64, alpha: f64) -> Result<Vec<(Tirp, ProportionTestResult)>> {
    let tirps: Vec<Tirp> = class.mined.iter().map(|p| p.tirp.clone()).collect();
    let found = presence(&tirps, class.entities, &class.config.relation);
    split_tests(tirps.iter().zip(&found), class.cohort_size, seed, alpha)
}

fn split_tests<'t>(
    tirps: impl Iterator<Item = (&'t Tirp, &'t Presence)>,
    n: usize,
    seed: u64,
    alpha: f64,
) -> Result<Vec<(Tirp, ProportionTestResult)>> {
    let (first, second) = split_halves(n, seed);
    if first.is_empty() || second.is_empty() {
        return Ok(Vec::new());
    }
    // Members at index >= entities.len() have no intervals.
    let mut in_first = vec![false; n];
    for &i in &first {
        in_first[i] = true;
    }
    tirps
        .map(|(tirp, p)| {
            let x1 = p.entities.iter().filter(|&&e| in_first[e]).count();
            let x2 = p.entities.len() - x1;
            Ok((tirp.clone(), proportion_test(x1, first.len(), x2, second.len(), alpha)?))
        })
        .collect()
}

/// Compare the TIRPs mined in two classes.
pub fn compare_cohorts(a: &CohortData<'_>, b: &CohortData<'_>, cfg: &StatsConfig) -> Result<CohortComparison> {
    if a.config != b.config {
        return Err(Error::ConfigMismatch(format!(
            "class '{}' was mined with {:?} but class '{}' with {:?}",
            a.label, a.config, b.label, b.config
        )));
    }
    cfg.validate()?;
    validate_class(a)?;
    validate_class(b)?;
    let map_a = support_map(a.mined);
    let map_b = support_map(b.mined);

    let mut all: Vec<&Tirp> = map_a.keys().chain(map_b.keys()).copied().collect();
    all.sort();
    all.dedup();
    let shared: Vec<&Tirp> = map_a.keys().filter(|t| map_b.contains_key(*t)).copied().collect();

    let ks_pairs: Vec<(f64, f64)> = match cfg.ks_domain {
        KsDomain::Shared => shared
            .iter()
            .map(|t| (map_a[t].stats.horizontal_support, map_b[t].stats.horizontal_support))
            .collect(),
        KsDomain::Union => all
            .iter()
            .map(|t| {
                let s = |m: &BTreeMap<&Tirp, &MinedPattern>| m.get(t).map_or(0.0, |p| p.stats.horizontal_support);
                (s(&map_a), s(&map_b))
            })
            .collect(),
    };
    let ks = if ks_pairs.is_empty() {
        None
    } else {
        let (xs, ys): (Vec<f64>, Vec<f64>) = ks_pairs.into_iter().unzip();
        Some(ks_two_sample(&xs, &ys, cfg.alpha)?)
    };

    let between = shared
        .iter()
        .map(|t| {
            let (sa, sb) = (&map_a[t].stats, &map_b[t].stats);
            Ok(((*t).clone(), proportion_test(sa.supporting_entities, a.cohort_size, sb.supporting_entities, b.cohort_size, cfg.alpha)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let owned: Vec<Tirp> = all.iter().map(|t| (*t).clone()).collect();
    let pres_a = presence(&owned, a.entities, &a.config.relation);
    let pres_b = presence(&owned, b.entities, &b.config.relation);
    let within_a = split_tests(
        owned.iter().zip(&pres_a).filter(|(t, _)| map_a.contains_key(t)),
        a.cohort_size,
        class_split_seed(cfg.split_seed, 0),
        cfg.alpha,
    )?;
    let within_b = split_tests(
        owned.iter().zip(&pres_b).filter(|(t, _)| map_b.contains_key(t)),
        b.cohort_size,
        class_split_seed(cfg.split_seed, 1),
        cfg.alpha,
    )?;
    let mut ranking = owned
        .iter()
        .zip(pres_a.iter().zip(&pres_b))
        .map(|(t, (pa, pb))| {
            let (xa, xb) = (pa.entities.len(), pb.entities.len());
            debug_assert!(map_a.get(t).is_none_or(|p| p.stats.supporting_entities == xa));
            debug_assert!(map_b.get(t).is_none_or(|p| p.stats.supporting_entities == xb));
            Ok((
                t,
                RankedPattern {
                    rank: 0,
                    tirp: t.canonical_string(),
                    k: t.k(),
                    information_gain: information_gain_counts(xa, a.cohort_size, xb, b.cohort_size)?,
                    entities_a: xa,
                    entities_b: xb,
                    support_a: xa as f64 / a.cohort_size as f64,
                    support_b: xb as f64 / b.cohort_size as f64,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    ranking.sort_by(|(ta, ra), (tb, rb)| rb.information_gain.total_cmp(&ra.information_gain).then_with(|| ta.cmp(tb)));
    let ranking: Vec<RankedPattern> = ranking
        .into_iter()
        .enumerate()
        .map(|(i, (_, mut r))| {
            r.rank = i + 1;
            r
        })
        .collect();

    let between_results: Vec<_> = between.iter().map(|(_, r)| *r).collect();
    let within_a_results: Vec<_> = within_a.iter().map(|(_, r)| *r).collect();
    let within_b_results: Vec<_> = within_b.iter().map(|(_, r)| *r).collect();
    let report = CohortComparisonReport {
        miner_config: *a.config,
        stats_config: *cfg,
        class_a: ClassSummary { label: a.label.to_string(), cohort_size: a.cohort_size, tirps: map_a.len() },
        class_b: ClassSummary { label: b.label.to_string(), cohort_size: b.cohort_size, tirps: map_b.len() },
        total_distinct: all.len(),
        shared: shared.len(),
        exclusive_a: map_a.len() - shared.len(),
        exclusive_b: map_b.len() - shared.len(),
        ks: KsBlock { domain: cfg.ks_domain, result: ks },
        proportion_tests: vec![
            ProportionRow::new(format!("{} vs. {}", a.label, b.label), &between_results),
            ProportionRow::new(format!("Only {} (50% vs. 50%)", a.label), &within_a_results),
            ProportionRow::new(format!("Only {} (50% vs. 50%)", b.label), &within_b_results),
        ],
        top_patterns: ranking.iter().take(cfg.top_n).cloned().collect(),
    };
    Ok(CohortComparison { report, between, within_a, within_b, ranking })
}
