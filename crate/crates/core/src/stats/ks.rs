use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of a two-sample Kolmogorov-Smirnov test. `reject` holds iff `d_statistic > critical_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d_statistic: f64,
    pub critical_d: f64,
    pub alpha: f64,
    pub n1: usize,
    pub n2: usize,
    pub reject: bool,
}

/// Tabulated large-sample coefficients c(alpha).
pub const KS_COEFFICIENTS: [(f64, f64); 3] = [(0.10, 1.22), (0.05, 1.36), (0.01, 1.63)];

pub fn ks_coefficient(alpha: f64) -> Result<f64> {
    KS_COEFFICIENTS
        .iter()
        .find(|(a, _)| (a - alpha).abs() < 1e-12)
        .map(|&(_, c)| c)
        .ok_or_else(|| Error::Statistics(format!("alpha {alpha} has no tabulated KS coefficient (use 0.10, 0.05 or 0.01)")))
}

pub fn ks_critical_d(alpha: f64, n1: usize, n2: usize) -> Result<f64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Statistics("KS test needs two non-empty samples".into()));
    }
    let (a, b) = (n1 as f64, n2 as f64);
    Ok(ks_coefficient(alpha)? * ((a + b) / (a * b)).sqrt())
}

/// Exact sup-distance between the two empirical distribution functions.
pub fn ks_statistic(sample1: &[f64], sample2: &[f64]) -> Result<f64> {
    if sample1.is_empty() || sample2.is_empty() {
        return Err(Error::Statistics("KS test needs two non-empty samples".into()));
    }
    if sample1.iter().chain(sample2).any(|v| v.is_nan()) {
        return Err(Error::Statistics("KS samples contain NaN".into()));
    }
    let mut x = sample1.to_vec();
    let mut y = sample2.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n1, n2) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let v = if x[i] <= y[j] { x[i] } else { y[j] };
        while i < n1 && x[i] <= v {
            i += 1;
        }
        while j < n2 && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    Ok(d)
}

pub fn ks_two_sample(sample1: &[f64], sample2: &[f64], alpha: f64) -> Result<KsResult> {
    let d_statistic = ks_statistic(sample1, sample2)?;
    let critical_d = ks_critical_d(alpha, sample1.len(), sample2.len())?;
    Ok(KsResult {
        d_statistic,
        critical_d,
        alpha,
        n1: sample1.len(),
        n2: sample2.len(),
        reject: d_statistic > critical_d,
    })
}
