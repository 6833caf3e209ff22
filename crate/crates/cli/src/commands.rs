use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use log::{info, warn};
use tirp_core::io::{self, Labels};
use tirp_core::kbta::abstract_all;
use tirp_core::output::{self, MiningOutput};
use tirp_core::stats::StatsConfig;
use tirp_core::synth::{generate, SynthConfig};
use tirp_core::{
    compare_cohorts, mine as mine_cohort, window_extract, CohortData, EntityId, EntityIntervals, Error, KnowledgeBase,
    MinerConfig, RelationConfig, SymbolResolver, WindowConfig,
};

use crate::{AbstractArgs, DiscriminateArgs, MineArgs, ReportArgs, SynthArgs};

fn load_kb(path: Option<&Path>) -> Result<KnowledgeBase> {
    match path {
        Some(p) => Ok(KnowledgeBase::load(p)?),
        None => Ok(KnowledgeBase::sepsis()),
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?;
    }
    Ok(())
}

fn stdout_write(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::Io { path: "<stdout>".into(), source: e })?;
    Ok(())
}

pub fn abstract_events(args: &AbstractArgs) -> Result<()> {
    let kb = load_kb(args.kb.as_deref())?;
    let log = io::load_events(&args.events, args.time_format)?;
    let mut entities: BTreeSet<EntityId> = log.entities();
    let samples = match &args.windows {
        Some(path) => {
            let times = io::load_reference_times(path, log.time_base)?;
            let labs = match &args.lab_concepts {
                Some(p) => io::load_concept_list(p)?,
                None => BTreeSet::new(),
            };
            entities.extend(times.keys().cloned());
            let cfg = WindowConfig::new(times, args.window_min, labs)?;
            window_extract(&log.samples, &cfg)?
        }
        None => log.samples,
    };
    let ids: Vec<EntityId> = entities.into_iter().collect();
    let (intervals, unknown) = abstract_all(&samples, &ids, &kb);
    if !unknown.is_empty() {
        let names: Vec<&str> = unknown.iter().map(String::as_str).collect();
        warn!("skipped concepts missing from the knowledge base: {}", names.join(", "));
    }
    ensure_parent(&args.out)?;
    io::write_intervals(io::create_file(&args.out)?, &intervals)?;

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for iv in intervals.iter().flat_map(|e| &e.intervals) {
        *counts.entry(iv.symbol.concept()).or_default() += 1;
    }
    let mut text = String::from("concept\tintervals\n");
    for (concept, n) in &counts {
        text.push_str(&format!("{concept}\t{n}\n"));
    }
    stdout_write(&text)?;
    info!("wrote {} intervals for {} entities to {}", counts.values().sum::<usize>(), intervals.len(), args.out.display());
    Ok(())
}

/// Intervals grouped by class label, each group sorted by entity id, with the
/// class sizes taken from the labels file.
struct Classes {
    members: BTreeMap<String, Vec<EntityIntervals>>,
    sizes: BTreeMap<String, usize>,
}

fn partition(intervals: Vec<EntityIntervals>, labels: &Labels) -> Result<Classes> {
    let unlabeled: Vec<String> = intervals
        .iter()
        .filter(|e| !labels.contains_key(&e.entity))
        .map(|e| e.entity.to_string())
        .collect();
    if !unlabeled.is_empty() {
        return Err(Error::UnlabeledEntities(unlabeled).into());
    }
    let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
    for class in labels.values() {
        *sizes.entry(class.clone()).or_default() += 1;
    }
    let mut members: BTreeMap<String, Vec<EntityIntervals>> = sizes.keys().map(|c| (c.clone(), Vec::new())).collect();
    for e in intervals {
        members.get_mut(&labels[&e.entity]).expect("class of a labeled entity").push(e);
    }
    for group in members.values_mut() {
        group.sort_by(|a, b| a.entity.cmp(&b.entity));
    }
    Ok(Classes { members, sizes })
}

fn class_file_name(class: &str) -> Result<String> {
    let ok = !class.is_empty()
        && class != "."
        && class != ".."
        && class.chars().all(|c| c.is_alphanumeric() || "-_.+".contains(c));
    if ok {
        Ok(format!("{class}.jsonl"))
    } else {
        Err(Error::Config(format!("class label '{class}' cannot be used as a file name")).into())
    }
}

pub fn mine(args: &MineArgs) -> Result<()> {
    let kb = load_kb(args.kb.as_deref())?;
    let resolver = SymbolResolver::new(Some(&kb));
    let config = MinerConfig {
        min_support: args.min_support,
        relation: RelationConfig { epsilon: args.epsilon, max_gap: args.max_gap },
        max_pattern_len: args.max_len,
    };
    config.validate()?;
    let labels = io::load_labels(&args.labels)?;
    let intervals = io::load_intervals(&args.intervals, resolver)?;
    let classes = partition(intervals, &labels)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::Io { path: args.out_dir.clone(), source: e })?;

    let mut summary = String::from("class\tentities\ttirps\tfile\n");
    for (class, members) in &classes.members {
        let size = classes.sizes[class];
        let file = args.out_dir.join(class_file_name(class)?);
        let patterns = mine_cohort(members, size, &config)?;
        output::write_mining(io::create_file(&file)?, class, size, &config, &patterns)?;
        summary.push_str(&format!("{class}\t{size}\t{}\t{}\n", patterns.len(), file.display()));
        info!("class {class}: {} TIRPs", patterns.len());
    }
    stdout_write(&summary)
}

pub fn discriminate(args: &DiscriminateArgs) -> Result<()> {
    let kb = load_kb(args.kb.as_deref())?;
    let resolver = SymbolResolver::new(Some(&kb));
    let a: MiningOutput = output::load_mining(&args.mined_a, resolver)?;
    let b: MiningOutput = output::load_mining(&args.mined_b, resolver)?;
    if a.header.config != b.header.config {
        return Err(Error::ConfigMismatch(format!(
            "{} was mined with {:?} but {} with {:?}",
            args.mined_a.display(),
            a.header.config,
            args.mined_b.display(),
            b.header.config
        ))
        .into());
    }
    let labels = io::load_labels(&args.labels)?;
    let intervals = io::load_intervals(&args.intervals, resolver)?;
    let classes = partition(intervals, &labels)?;
    let members = |out: &MiningOutput, path: &Path| -> Result<&[EntityIntervals]> {
        let class = &out.header.class;
        let size = classes.sizes.get(class).copied().unwrap_or(0);
        if size != out.header.cohort_size {
            return Err(Error::ConfigMismatch(format!(
                "{} was mined over {} entities of class '{class}' but the labels list {size}",
                path.display(),
                out.header.cohort_size
            ))
            .into());
        }
        Ok(classes.members.get(class).map(Vec::as_slice).unwrap_or(&[]))
    };
    let ents_a = members(&a, &args.mined_a)?;
    let ents_b = members(&b, &args.mined_b)?;
    let stats = StatsConfig { alpha: args.alpha, ks_domain: args.ks_domain, split_seed: args.split_seed, top_n: args.top };
    let data_a = CohortData {
        label: &a.header.class,
        entities: ents_a,
        cohort_size: a.header.cohort_size,
        mined: &a.patterns,
        config: &a.header.config,
    };
    let data_b = CohortData {
        label: &b.header.class,
        entities: ents_b,
        cohort_size: b.header.cohort_size,
        mined: &b.patterns,
        config: &b.header.config,
    };
    let comparison = compare_cohorts(&data_a, &data_b, &stats)?;
    ensure_parent(&args.out)?;
    output::write_report(io::create_file(&args.out)?, &comparison.report)?;
    stdout_write(&output::render_report(&comparison.report, args.top))
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let cfg = SynthConfig::load(&args.config)?;
    let kb = match &cfg.kb {
        Some(p) => {
            let base = args.config.parent().unwrap_or(Path::new("."));
            KnowledgeBase::load(base.join(p))?
        }
        None => KnowledgeBase::sepsis(),
    };
    let cohort = generate(&cfg, &kb)?;
    cohort.write(&args.out_dir)?;
    let mut text = format!(
        "entities\t{}\nsamples\t{}\n",
        cohort.labels.len(),
        cohort.samples.len()
    );
    for (tirp, members) in &cohort.planted {
        text.push_str(&format!("planted\t{tirp}\t{}\n", members.len()));
    }
    stdout_write(&text).context("writing the summary")
}

pub fn report(args: &ReportArgs) -> Result<()> {
    let report = output::load_report(&args.input)?;
    let mut text = output::ranking_table(&report, args.top, args.format);
    text.push('\n');
    text.push_str(&output::proportion_table(&report, args.format));
    stdout_write(&text)
}
