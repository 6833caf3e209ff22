//! Seeded synthetic cohorts with planted TIRPs.
//!
//! Every concept is sampled on a regular grid of `sample_step` minutes. The grid
//! of the concept at index `c` is shifted by `(c + 1) * sample_step / (n_concepts + 1)`,
//! so intervals of different concepts never share an endpoint. Baseline values
//! are Normal; noise excursions turn short runs of grid samples High or Low.
//!
//! A planted TIRP is laid out on the unshifted grid, which no concept samples
//! on, and its interval endpoints get dedicated samples. The two grid samples on
//! either side of a planted interval are held Normal, so every interval with an
//! endpoint on the planted grid is fixed by the layout alone and noise can
//! neither create nor alter an exact alignment with it.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{self, Labels, ReferenceTimes};
use crate::kb::{AbstractionRule, KnowledgeBase};
use crate::model::{EntityId, Kind, Sample, SymbolResolver, Time};
use crate::relations::{classify, RelationConfig};
use crate::tirp::Tirp;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedSpec {
    /// Canonical TIRP text, e.g. `BodyTemperature.S.High|HeartRate.S.High;m`.
    pub tirp: String,
    pub case_rate: f64,
    pub control_rate: f64,
}

fn default_step() -> Time {
    60
}

fn default_noise_len() -> usize {
    3
}

fn default_class_labels() -> [String; 2] {
    ["case".to_string(), "control".to_string()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub n_case: usize,
    pub n_control: usize,
    pub concepts: Vec<String>,
    #[serde(default)]
    pub planted: Vec<PlantedSpec>,
    /// Poisson mean of noise excursions per entity; each excursion yields one
    /// High or Low State interval.
    pub noise_intervals_per_entity: f64,
    pub horizon: Time,
    pub seed: u64,
    #[serde(default = "default_step")]
    pub sample_step: Time,
    /// Longest noise excursion, in grid samples.
    #[serde(default = "default_noise_len")]
    pub max_noise_len: usize,
    /// Knowledge base file, relative to the config file; the built-in one if absent.
    #[serde(default)]
    pub kb: Option<PathBuf>,
    #[serde(default = "default_class_labels")]
    pub class_labels: [String; 2],
}

impl SynthConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("synth config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Level {
    Low,
    Normal,
    High,
}

/// A planted TIRP with its interval layout in grid steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub tirp: Tirp,
    /// `(start, end)` per TIRP interval, in steps from the layout origin.
    pub slots: Vec<(Time, Time)>,
}

impl Layout {
    pub fn span(&self) -> Time {
        self.slots.iter().map(|s| s.1).max().unwrap_or(0)
    }
}

/// Smallest layout (lexicographic in the endpoint sequence) realizing `tirp`
/// with exact endpoints, or a reason it cannot exist.
///
/// Intervals of the same concept need a Normal sample between them, so they
/// must be in a `<` relation at least two steps apart.
pub fn solve_layout(tirp: &Tirp) -> std::result::Result<Layout, String> {
    let k = tirp.k();
    for s in tirp.symbols() {
        if s.kind() != Kind::State {
            return Err(format!("{s} is not a State symbol"));
        }
        if s.rank() != 0 && s.rank() != 2 {
            return Err(format!("{s} is not an out-of-range State label"));
        }
    }
    let limit = 3 * k as Time + 2;
    let exact = RelationConfig { epsilon: 0, max_gap: Time::MAX / 4 };
    let mut slots: Vec<(Time, Time)> = Vec::with_capacity(k);

    fn fits(tirp: &Tirp, slots: &[(Time, Time)], cand: (Time, Time), cfg: &RelationConfig) -> bool {
        let j = slots.len();
        let syms = tirp.symbols();
        slots.iter().enumerate().all(|(i, &prev)| {
            let ordered = (prev.0, prev.1, &syms[i]) < (cand.0, cand.1, &syms[j]);
            let rel = tirp.relation(i, j);
            let same_concept = syms[i].concept() == syms[j].concept();
            ordered
                && classify(prev, cand, cfg) == Some(rel)
                && (!same_concept || (rel == crate::relations::Relation::Before && cand.0 - prev.1 >= 2))
        })
    }

    fn search(tirp: &Tirp, slots: &mut Vec<(Time, Time)>, limit: Time, cfg: &RelationConfig) -> bool {
        if slots.len() == tirp.k() {
            return true;
        }
        let lo = slots.last().map_or(0, |s| s.0);
        for start in lo..=limit {
            for end in start..=limit {
                if fits(tirp, slots, (start, end), cfg) {
                    slots.push((start, end));
                    if search(tirp, slots, limit, cfg) {
                        return true;
                    }
                    slots.pop();
                }
            }
            if slots.is_empty() {
                break;
            }
        }
        false
    }

    if search(tirp, &mut slots, limit, &exact) {
        Ok(Layout { tirp: tirp.clone(), slots })
    } else {
        Err("no interval layout satisfies its relations".to_string())
    }
}

/// Generated cohort with the entities that received each planted TIRP.
#[derive(Debug, Clone)]
pub struct SyntheticCohort {
    pub samples: Vec<Sample>,
    pub labels: Labels,
    pub reference_times: BTreeMap<EntityId, ReferenceTimes>,
    pub planted: Vec<(Tirp, BTreeSet<EntityId>)>,
}

impl SyntheticCohort {
    /// Writes `events.csv`, `labels.csv` and `reference_times.csv` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        io::write_events(io::create_file(dir.join("events.csv"))?, &self.samples)?;
        io::write_labels(io::create_file(dir.join("labels.csv"))?, &self.labels)?;
        io::write_reference_times(io::create_file(dir.join("reference_times.csv"))?, &self.reference_times)?;
        Ok(())
    }
}

/// Grid steps held Normal on each side of a planted interval.
const GUARD: Time = 2;

struct Plan<'a> {
    cfg: &'a SynthConfig,
    rules: Vec<(&'a AbstractionRule, Arc<str>)>,
    layouts: Vec<Layout>,
    segment: Time,
}

fn validate<'a>(cfg: &'a SynthConfig, kb: &'a KnowledgeBase) -> Result<Plan<'a>> {
    let bad = |m: String| Err(Error::Config(m));
    if cfg.horizon <= 0 {
        return bad(format!("horizon must be positive, got {}", cfg.horizon));
    }
    if cfg.sample_step <= 0 {
        return bad(format!("sample_step must be positive, got {}", cfg.sample_step));
    }
    if !(cfg.noise_intervals_per_entity.is_finite() && cfg.noise_intervals_per_entity >= 0.0) {
        return bad(format!("noise_intervals_per_entity must be a non-negative number, got {}", cfg.noise_intervals_per_entity));
    }
    if cfg.max_noise_len == 0 {
        return bad("max_noise_len must be at least 1".into());
    }
    if cfg.class_labels[0] == cfg.class_labels[1] {
        return bad("class labels must differ".into());
    }
    if cfg.concepts.is_empty() {
        return bad("at least one concept is required".into());
    }
    if cfg.concepts.len() as Time >= cfg.sample_step {
        return bad(format!("{} concepts need a sample_step above {} minutes", cfg.concepts.len(), cfg.concepts.len()));
    }
    let mut seen = BTreeSet::new();
    let mut rules = Vec::new();
    for c in &cfg.concepts {
        if !seen.insert(c) {
            return bad(format!("concept {c} listed twice"));
        }
        let Some(rule) = kb.get(c) else {
            return bad(format!("concept {c} is not in the knowledge base"));
        };
        if rule.interp_max_gap < cfg.sample_step {
            return bad(format!(
                "sample_step {} exceeds the interpolation gap {} of {c}",
                cfg.sample_step, rule.interp_max_gap
            ));
        }
        rules.push((rule, Arc::<str>::from(c.as_str())));
    }

    let resolver = SymbolResolver::new(Some(kb));
    let mut layouts = Vec::new();
    for p in &cfg.planted {
        for (name, rate) in [("case_rate", p.case_rate), ("control_rate", p.control_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("{name} of {} must lie in [0, 1], got {rate}", p.tirp));
            }
        }
        let tirp = Tirp::parse(&p.tirp, resolver)?;
        let unrealizable = |reason: String| Error::Unrealizable { tirp: p.tirp.clone(), reason };
        if let Some(s) = tirp.symbols().iter().find(|s| !seen.contains(&s.concept().to_string())) {
            return Err(unrealizable(format!("concept {} is not among the generated concepts", s.concept())));
        }
        layouts.push(solve_layout(&tirp).map_err(unrealizable)?);
    }
    let segment = cfg.horizon / layouts.len().max(1) as Time;
    for (layout, p) in layouts.iter().zip(&cfg.planted) {
        let needed = (layout.span() + 2 * GUARD + 1) * cfg.sample_step;
        if needed > segment {
            return Err(Error::Unrealizable {
                tirp: p.tirp.clone(),
                reason: format!("needs {needed} minutes but only {segment} are available per planted pattern"),
            });
        }
    }
    Ok(Plan { cfg, rules, layouts, segment })
}

fn draw_members(rng: &mut ChaCha8Rng, n: usize, rate: f64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let take = (rate * n as f64).round() as usize;
    let mut member = vec![false; n];
    for &i in &order[..take.min(n)] {
        member[i] = true;
    }
    member
}

/// Per-concept levels of one entity: grid and planted sample times with the
/// reserved (planted or guard) ones marked.
struct Track {
    levels: BTreeMap<Time, Level>,
    reserved: BTreeSet<Time>,
    grid: Vec<Time>,
}

impl Plan<'_> {
    fn phase(&self, c: usize) -> Time {
        (c as Time + 1) * self.cfg.sample_step / (self.cfg.concepts.len() as Time + 1)
    }

    fn entity(&self, rng: &mut ChaCha8Rng, entity: &EntityId, planted: &[bool], out: &mut Vec<Sample>) -> Result<()> {
        let step = self.cfg.sample_step;
        let mut tracks: Vec<Track> = (0..self.rules.len())
            .map(|c| {
                let grid: Vec<Time> = (0..).map(|j| self.phase(c) + j * step).take_while(|&t| t <= self.cfg.horizon).collect();
                Track {
                    levels: grid.iter().map(|&t| (t, Level::Normal)).collect(),
                    reserved: BTreeSet::new(),
                    grid,
                }
            })
            .collect();

        for (p, layout) in self.layouts.iter().enumerate() {
            if !planted[p] {
                continue;
            }
            let seg_start = p as Time * self.segment;
            let free_steps = (self.segment / step) - layout.span() - 2 * GUARD - 1;
            let origin = seg_start + step * (GUARD + rng.random_range(0..=free_steps));
            for (sym, &(s, e)) in layout.tirp.symbols().iter().zip(&layout.slots) {
                let c = self.cfg.concepts.iter().position(|n| n == sym.concept()).expect("validated");
                let level = if sym.rank() == 0 { Level::Low } else { Level::High };
                let (start, end) = (origin + s * step, origin + e * step);
                let track = &mut tracks[c];
                for t in [start, end] {
                    track.levels.insert(t, level);
                    track.reserved.insert(t);
                }
                for &t in &track.grid {
                    if t >= start - GUARD * step && t <= end + GUARD * step {
                        let inside = t >= start && t <= end;
                        track.levels.insert(t, if inside { level } else { Level::Normal });
                        track.reserved.insert(t);
                    }
                }
            }
        }

        let n_noise = if self.cfg.noise_intervals_per_entity > 0.0 {
            let poisson = Poisson::new(self.cfg.noise_intervals_per_entity)
                .map_err(|e| Error::Config(format!("noise rate: {e}")))?;
            poisson.sample(rng) as usize
        } else {
            0
        };
        for _ in 0..n_noise {
            let c = rng.random_range(0..tracks.len());
            let level = if rng.random_bool(0.5) { Level::High } else { Level::Low };
            let len = rng.random_range(1..=self.cfg.max_noise_len);
            let track = &mut tracks[c];
            let first = rng.random_range(0..track.grid.len());
            let times = &track.grid[first..(first + len).min(track.grid.len())];
            if times.iter().any(|t| track.reserved.contains(t)) {
                continue;
            }
            for &t in times {
                track.levels.insert(t, level);
            }
        }

        for ((rule, concept), track) in self.rules.iter().zip(&tracks) {
            for (&t, &level) in &track.levels {
                out.push(Sample {
                    entity: entity.clone(),
                    concept: concept.clone(),
                    t,
                    value: value_for(rng, rule, level),
                });
            }
        }
        Ok(())
    }
}

fn value_for(rng: &mut ChaCha8Rng, rule: &AbstractionRule, level: Level) -> f64 {
    let d = rule.gradient_delta;
    let (centre, spread) = match level {
        Level::Normal => (
            (rule.normal_low + rule.normal_high) / 2.0,
            (0.2 * d).min(0.25 * (rule.normal_high - rule.normal_low)),
        ),
        Level::High => (rule.normal_high + 2.0 * d, 0.2 * d),
        Level::Low => (rule.normal_low - 2.0 * d, 0.2 * d),
    };
    let v = centre + rng.random_range(-spread..=spread);
    (v * 1e4).round() / 1e4
}

/// Generates the cohort described by `cfg`; deterministic in `cfg.seed`.
pub fn generate(cfg: &SynthConfig, kb: &KnowledgeBase) -> Result<SyntheticCohort> {
    let plan = validate(cfg, kb)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let classes = [(&cfg.class_labels[0], cfg.n_case), (&cfg.class_labels[1], cfg.n_control)];

    // membership[p][class][i]
    let membership: Vec<[Vec<bool>; 2]> = cfg
        .planted
        .iter()
        .map(|p| {
            let case = draw_members(&mut rng, cfg.n_case, p.case_rate);
            let control = draw_members(&mut rng, cfg.n_control, p.control_rate);
            [case, control]
        })
        .collect();

    let mut samples = Vec::new();
    let mut labels = Labels::new();
    let mut reference_times = BTreeMap::new();
    let mut planted: Vec<(Tirp, BTreeSet<EntityId>)> =
        plan.layouts.iter().map(|l| (l.tirp.clone(), BTreeSet::new())).collect();
    for (class, &(label, n)) in classes.iter().enumerate() {
        for i in 0..n {
            let entity: EntityId = format!("{label}-{i:04}").into();
            let flags: Vec<bool> = membership.iter().map(|m| m[class][i]).collect();
            plan.entity(&mut rng, &entity, &flags, &mut samples)?;
            for (p, &f) in flags.iter().enumerate() {
                if f {
                    planted[p].1.insert(entity.clone());
                }
            }
            labels.insert(entity.clone(), label.clone());
            reference_times.insert(entity, ReferenceTimes { admission: 0, reference: cfg.horizon });
        }
    }
    samples.sort_by(|a, b| a.entity.cmp(&b.entity).then_with(|| a.concept.cmp(&b.concept)).then(a.t.cmp(&b.t)));
    Ok(SyntheticCohort { samples, labels, reference_times, planted })
}
