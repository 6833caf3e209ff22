//! Rule-based bedside sepsis scores.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Score {
    pub score: u8,
    pub positive: bool,
}

impl Score {
    fn from_criteria(criteria: &[bool]) -> Self {
        let score = criteria.iter().filter(|&&c| c).count() as u8;
        Score { score, positive: score >= 2 }
    }
}

/// qSOFA: respiratory rate >= 22/min, systolic BP <= 100 mmHg, GCS < 15.
pub fn qsofa_score(respiratory_rate: f64, systolic_bp: f64, gcs: f64) -> Score {
    Score::from_criteria(&[respiratory_rate >= 22.0, systolic_bp <= 100.0, gcs < 15.0])
}

/// SIRS with WBC in 10^3 cells/mm^3 and immature bands in percent.
/// Absent optional inputs leave their half of a criterion unmet.
pub fn sirs_score(
    temperature: f64,
    heart_rate: f64,
    respiratory_rate: f64,
    paco2: Option<f64>,
    wbc: f64,
    immature_bands_pct: Option<f64>,
) -> Score {
    Score::from_criteria(&[
        temperature > 38.0 || temperature < 36.0,
        heart_rate > 90.0,
        respiratory_rate > 20.0 || paco2.is_some_and(|p| p < 32.0),
        wbc > 12.0 || wbc < 4.0 || immature_bands_pct.is_some_and(|b| b > 10.0),
    ])
}
