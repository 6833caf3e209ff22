use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Pooled two-proportion z-test, two-sided, without continuity correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionTestResult {
    pub x1: usize,
    pub n1: usize,
    pub x2: usize,
    pub n2: usize,
    pub z: f64,
    pub z_critical: f64,
    pub alpha: f64,
    pub significant: bool,
}

/// Two-sided standard normal critical value for `alpha`.
pub fn z_critical(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Statistics(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(1.0 - alpha / 2.0))
}

pub fn proportion_z(x1: usize, n1: usize, x2: usize, n2: usize) -> Result<f64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Statistics("proportion test needs non-empty groups".into()));
    }
    if x1 > n1 || x2 > n2 {
        return Err(Error::Statistics(format!("counts {x1}/{n1}, {x2}/{n2} exceed group sizes")));
    }
    let (a, b) = (n1 as f64, n2 as f64);
    let pooled = (x1 + x2) as f64 / (a + b);
    if pooled == 0.0 || pooled == 1.0 {
        return Ok(0.0);
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / a + 1.0 / b)).sqrt();
    Ok((x1 as f64 / a - x2 as f64 / b) / se)
}

pub fn proportion_test(x1: usize, n1: usize, x2: usize, n2: usize, alpha: f64) -> Result<ProportionTestResult> {
    let z_critical = z_critical(alpha)?;
    let z = proportion_z(x1, n1, x2, n2)?;
    Ok(ProportionTestResult { x1, n1, x2, n2, z, z_critical, alpha, significant: z.abs() > z_critical })
}
