//! Golden checks shared with the acceptance harness: the shipped knowledge
//! base against an independent cutoff table, and abstraction of the hand-worked
//! example dataset. Both panic on mismatch.

use tirp_core::io::{read_events, write_intervals, TimeFormat};
use tirp_core::kbta::abstract_all;
use tirp_core::{EntityId, Kind, KnowledgeBase};

/// (concept, normal_low, normal_high, gradient_delta, lab), typed
/// independently of kb/sepsis26.json.
const REFERENCE: [(&str, f64, f64, f64, bool); 26] = [
    ("Albumin", 3.4, 5.4, 0.5, true),
    ("Bilirubin", 0.2, 1.2, 0.5, true),
    ("Chloride", 96.0, 106.0, 5.0, true),
    ("Creatinine", 0.6, 1.3, 0.2, true),
    ("Fibrinogen", 200.0, 400.0, 50.0, true),
    ("Glucose", 70.0, 100.0, 10.0, true),
    ("Hemoglobin", 11.0, 18.0, 2.0, true),
    ("Lactate", 0.5, 2.2, 1.0, true),
    ("PCO2", 38.0, 42.0, 2.0, true),
    ("PH", 7.34, 7.45, 0.05, true),
    ("Phosphate", 2.4, 4.1, 0.5, true),
    ("PLT", 150.0, 400.0, 50.0, true),
    ("PO2", 75.0, 100.0, 10.0, true),
    ("Urea", 10.0, 20.0, 5.0, true),
    ("Sodium", 135.0, 145.0, 5.0, true),
    ("TCO2", 22.0, 28.0, 2.0, true),
    ("WBC", 4.5, 10.0, 1.0, true),
    ("BodyTemperature", 36.0, 38.0, 0.5, false),
    ("GlasgowComaScale", 8.0, 12.0, 2.0, false),
    ("DiastolicBloodPressure", 70.0, 90.0, 10.0, false),
    ("SystolicBloodPressure", 110.0, 140.0, 10.0, false),
    ("MeanBloodPressure", 65.0, 80.0, 5.0, false),
    ("HeartRate", 60.0, 80.0, 10.0, false),
    ("MinuteVentilation", 5.4, 11.0, 0.5, false),
    ("PulsePressure", 35.0, 45.0, 5.0, false),
    ("RespiratoryRate", 7.0, 14.0, 3.0, false),
];

pub fn shipped_kb_matches_reference_table() {
    let kb = KnowledgeBase::sepsis();
    assert_eq!(kb.len(), REFERENCE.len());
    let labs: Vec<&str> = include_str!("../../../../kb/sepsis26-labs.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    for (concept, low, high, delta, lab) in REFERENCE {
        let rule = kb.get(concept).unwrap_or_else(|| panic!("{concept} missing"));
        assert_eq!((rule.normal_low, rule.normal_high, rule.gradient_delta), (low, high, delta), "{concept}");
        assert_eq!(labs.contains(&concept), lab, "{concept} lab membership");
        assert!(rule.interp_max_gap > 0);
        let expected_labels = if concept == "GlasgowComaScale" {
            ["severe", "moderate", "mild"]
        } else {
            ["Low", "Normal", "High"]
        };
        assert_eq!(rule.labels(Kind::State), expected_labels, "{concept}");
        assert_eq!(rule.labels(Kind::Gradient), ["Decreasing", "Stable", "Increasing"]);
    }
    assert_eq!(labs.len(), 17);
}

const EXPECTED: &str = "\
entity_id,concept,kind,label,start,end
p1,BodyTemperature,State,Normal,0,60
p1,BodyTemperature,Gradient,Increasing,0,180
p1,HeartRate,State,Normal,30,30
p1,HeartRate,Gradient,Increasing,30,90
p1,HeartRate,State,High,90,150
p1,HeartRate,Gradient,Stable,90,150
p1,BodyTemperature,State,High,120,240
p1,HeartRate,Gradient,Decreasing,150,270
p1,BodyTemperature,Gradient,Decreasing,180,300
p1,HeartRate,State,Normal,210,210
p1,HeartRate,State,Low,270,270
p1,HeartRate,Gradient,Stable,270,330
p1,BodyTemperature,State,Normal,300,300
p1,HeartRate,State,Normal,330,330
p1,BodyTemperature,State,Low,600,660
p1,BodyTemperature,Gradient,Stable,600,660
p2,WBC,State,High,0,0
p2,GlasgowComaScale,State,mild,0,60
p2,GlasgowComaScale,Gradient,Stable,0,60
p2,WBC,Gradient,Decreasing,0,1440
p2,GlasgowComaScale,Gradient,Decreasing,60,180
p2,GlasgowComaScale,State,moderate,120,120
p2,GlasgowComaScale,State,severe,180,180
p2,WBC,State,Normal,1440,1440
p3,BodyTemperature,State,Normal,0,120
p3,BodyTemperature,Gradient,Stable,0,120
p3,HeartRate,State,Normal,0,120
p3,HeartRate,Gradient,Stable,0,120
";

pub fn hand_worked_dataset() {
    // p1: BT crosses into High and later Low past a 300 min gap; HR steps by
    // exactly delta (Stable) and touches both range boundaries (Normal).
    // p2: GCS with its own labels; WBC as a lab with a 1440 min gap.
    let events = include_str!("../../../../data/example/events.csv");
    let log = read_events(events.as_bytes(), "events.csv", TimeFormat::Minutes, None).unwrap();
    let ids: Vec<EntityId> = ["p1", "p2", "p3", "p4"].into_iter().map(EntityId::from).collect();
    let (intervals, unknown) = abstract_all(&log.samples, &ids, &KnowledgeBase::sepsis());
    assert_eq!(unknown.into_iter().collect::<Vec<_>>(), ["CentralVenousPressure"]);
    assert_eq!(intervals.len(), 4);
    assert!(intervals[3].intervals.is_empty());
    let mut out = Vec::new();
    write_intervals(&mut out, &intervals).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), EXPECTED);
}
