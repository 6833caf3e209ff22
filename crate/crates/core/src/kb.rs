//! Declarative abstraction knowledge base.
//!
//! The shipped `kb/sepsis26.json` holds the 26-concept sepsis knowledge base:
//! 17 laboratory tests (`interp_max_gap_min` 1800) and 9 bedside measurements
//! (240). The Glasgow Coma Scale row keeps the printed normal range of 8-12
//! with custom state labels `severe`/`moderate`/`mild`, even though a GCS of 15
//! is clinically normal.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_concept_name, Kind, Time};

const SEPSIS_KB: &str = include_str!("../../../kb/sepsis26.json");

/// One row of the knowledge base, as stored in the JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractionRule {
    pub concept: String,
    pub unit: String,
    pub normal_low: f64,
    pub normal_high: f64,
    pub gradient_delta: f64,
    #[serde(rename = "interp_max_gap_min")]
    pub interp_max_gap: Time,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_labels: Option<[String; 3]>,
}

impl AbstractionRule {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::KnowledgeBase(format!("{}: {msg}", self.concept)));
        if let Err(msg) = validate_concept_name(&self.concept) {
            return fail(msg);
        }
        if !self.normal_low.is_finite() || !self.normal_high.is_finite() {
            return fail("normal range must be finite".into());
        }
        if self.normal_low >= self.normal_high {
            return fail(format!(
                "normal_low {} must be below normal_high {}",
                self.normal_low, self.normal_high
            ));
        }
        if !(self.gradient_delta.is_finite() && self.gradient_delta > 0.0) {
            return fail(format!("gradient_delta {} must be positive", self.gradient_delta));
        }
        if self.interp_max_gap <= 0 {
            return fail(format!("interp_max_gap_min {} must be positive", self.interp_max_gap));
        }
        if let Some(labels) = &self.state_labels {
            if labels.iter().any(|l| l.is_empty() || l.contains(['|', ';', ',']) || l.contains(char::is_whitespace)) {
                return fail("state labels must be non-empty and free of separators".into());
            }
            if labels[0] == labels[1] || labels[1] == labels[2] || labels[0] == labels[2] {
                return fail("state labels must be distinct".into());
            }
        }
        Ok(())
    }

    /// Labels for `kind`, in declared (rank) order.
    pub fn labels(&self, kind: Kind) -> [&str; 3] {
        match (kind, &self.state_labels) {
            (Kind::State, Some([a, b, c])) => [a, b, c],
            _ => kind.default_labels(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KnowledgeBase {
    rules: BTreeMap<String, AbstractionRule>,
    source: Option<PathBuf>,
}

impl KnowledgeBase {
    pub fn from_rules(rules: impl IntoIterator<Item = AbstractionRule>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for rule in rules {
            rule.validate()?;
            let concept = rule.concept.clone();
            if map.insert(concept.clone(), rule).is_some() {
                return Err(Error::KnowledgeBase(format!("concept {concept} appears more than once")));
            }
        }
        Ok(KnowledgeBase { rules: map, source: None })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rules: Vec<AbstractionRule> =
            serde_json::from_str(text).map_err(|e| Error::KnowledgeBase(e.to_string()))?;
        Self::from_rules(rules)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut kb = Self::from_json(&text)
            .map_err(|e| Error::KnowledgeBase(format!("{}: {e}", path.display())))?;
        kb.source = Some(path.to_path_buf());
        Ok(kb)
    }

    /// The bundled 26-concept sepsis knowledge base.
    pub fn sepsis() -> Self {
        Self::from_json(SEPSIS_KB).expect("bundled knowledge base is valid")
    }

    pub fn get(&self, concept: &str) -> Option<&AbstractionRule> {
        self.rules.get(concept)
    }

    pub fn rules(&self) -> impl Iterator<Item = &AbstractionRule> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn to_json(&self) -> String {
        let rules: Vec<&AbstractionRule> = self.rules.values().collect();
        serde_json::to_string_pretty(&rules).expect("rules serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule_json(low: f64, high: f64, delta: f64) -> String {
        format!(
            r#"[{{"concept":"Chloride","unit":"mEq/L","normal_low":{low},"normal_high":{high},"gradient_delta":{delta},"interp_max_gap_min":1800}}]"#
        )
    }

    #[test]
    fn body_temperature_and_heart_rate_rows() {
        let kb = KnowledgeBase::sepsis();
        let bt = kb.get("BodyTemperature").unwrap();
        assert_eq!((bt.normal_low, bt.normal_high, bt.gradient_delta), (36.0, 38.0, 0.5));
        let hr = kb.get("HeartRate").unwrap();
        assert_eq!((hr.normal_low, hr.normal_high, hr.gradient_delta), (60.0, 80.0, 10.0));
    }

    #[test]
    fn inverted_range_is_rejected() {
        let err = KnowledgeBase::from_json(&rule_json(106.0, 96.0, 5.0)).unwrap_err();
        assert!(err.to_string().contains("normal_low"), "{err}");
    }

    #[test]
    fn nonpositive_delta_is_rejected() {
        assert!(KnowledgeBase::from_json(&rule_json(96.0, 106.0, 0.0)).is_err());
        assert!(KnowledgeBase::from_json(&rule_json(96.0, 106.0, -1.0)).is_err());
    }

    #[test]
    fn missing_field_is_rejected() {
        let text = r#"[{"concept":"Chloride","unit":"mEq/L","normal_low":96,"gradient_delta":5,"interp_max_gap_min":1800}]"#;
        let err = KnowledgeBase::from_json(text).unwrap_err();
        assert!(err.to_string().contains("normal_high"), "{err}");
    }

    #[test]
    fn duplicate_concept_is_rejected() {
        let one = rule_json(96.0, 106.0, 5.0);
        let body = one.trim_start_matches('[').trim_end_matches(']');
        assert!(KnowledgeBase::from_json(&format!("[{body},{body}]")).is_err());
    }

    #[test]
    fn gcs_uses_custom_labels() {
        let kb = KnowledgeBase::sepsis();
        let gcs = kb.get("GlasgowComaScale").unwrap();
        assert_eq!(gcs.labels(Kind::State), ["severe", "moderate", "mild"]);
        assert_eq!(gcs.labels(Kind::Gradient), ["Decreasing", "Stable", "Increasing"]);
        assert_eq!((gcs.normal_low, gcs.normal_high), (8.0, 12.0));
    }

    #[test]
    fn json_round_trip() {
        let kb = KnowledgeBase::sepsis();
        let again = KnowledgeBase::from_json(&kb.to_json()).unwrap();
        assert_eq!(kb, again);
    }
}
