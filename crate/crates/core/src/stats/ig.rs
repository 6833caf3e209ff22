use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Base-2 entropy of a count distribution; zero counts contribute nothing.
pub fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Information gain in bits of a boolean feature about the labels.
pub fn information_gain<L: Ord>(feature: &[bool], labels: &[L]) -> Result<f64> {
    if feature.len() != labels.len() {
        return Err(Error::Statistics(format!(
            "feature has {} entries but labels have {}",
            feature.len(),
            labels.len()
        )));
    }
    // label -> (count without feature, count with feature)
    let mut table: BTreeMap<&L, [usize; 2]> = BTreeMap::new();
    for (&f, l) in feature.iter().zip(labels) {
        table.entry(l).or_default()[f as usize] += 1;
    }
    if table.len() < 2 {
        return Err(Error::Statistics(format!(
            "information gain needs at least two classes, got {}",
            table.len()
        )));
    }
    let absent: Vec<usize> = table.values().map(|c| c[0]).collect();
    let present: Vec<usize> = table.values().map(|c| c[1]).collect();
    Ok(gain_from_table(&absent, &present))
}

/// Information gain of a feature present in `present_a` of `n_a` entities of one
/// class and `present_b` of `n_b` of the other.
pub fn information_gain_counts(present_a: usize, n_a: usize, present_b: usize, n_b: usize) -> Result<f64> {
    if present_a > n_a || present_b > n_b {
        return Err(Error::Statistics(format!(
            "presence counts {present_a}/{n_a}, {present_b}/{n_b} exceed class sizes"
        )));
    }
    if n_a == 0 || n_b == 0 {
        return Err(Error::Statistics("information gain needs at least two classes".into()));
    }
    Ok(gain_from_table(&[n_a - present_a, n_b - present_b], &[present_a, present_b]))
}

fn gain_from_table(absent: &[usize], present: &[usize]) -> f64 {
    let class: Vec<usize> = absent.iter().zip(present).map(|(a, p)| a + p).collect();
    let n: usize = class.iter().sum();
    let n_present: usize = present.iter().sum();
    let n_absent = n - n_present;
    let conditional = (n_present as f64 * entropy(present) + n_absent as f64 * entropy(absent)) / n as f64;
    (entropy(&class) - conditional).max(0.0)
}
