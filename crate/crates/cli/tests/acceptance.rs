//! Acceptance harness. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

#[path = "../../core/tests/common/golden.rs"]
mod golden;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tirp_core::kbta::abstract_all;
use tirp_core::output::load_mining;
use tirp_core::stats::{
    information_gain, information_gain_counts, ks_critical_d, ks_two_sample, proportion_test, z_critical,
};
use tirp_core::synth::{generate, PlantedSpec, SynthConfig};
use tirp_core::{
    classify, compare_cohorts, compose, enumerate_bruteforce, mine, CohortData, EntityId, EntityIntervals, Kind,
    KnowledgeBase, MinedPattern, MinerConfig, Relation, RelationConfig, RelationSet, StatsConfig, SupportStats,
    SymbolResolver, SymbolicInterval, Tirp,
};

/// Closed-form tolerance for criterion 5.
const TOL: f64 = 1e-9;

type Check = Result<String, String>;

struct Line {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn run(id: u8, name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Check) -> Line {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let timing = match budget {
        Some(b) => format!("{:.1}s, budget {}s", elapsed.as_secs_f64(), b.as_secs()),
        None => format!("{:.1}s", elapsed.as_secs_f64()),
    };
    let over = budget.is_some_and(|b| elapsed > b);
    let (pass, detail) = match result {
        Ok(d) if !over => (true, format!("{d} ({timing})")),
        Ok(d) => (false, format!("{d} but over budget ({timing})")),
        Err(d) => (false, format!("{d} ({timing})")),
    };
    Line { id, name, pass, detail }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Anti-monotonicity and half-matrix consistency over one mining output.
#[derive(Default)]
struct Audit {
    runs: usize,
    patterns: usize,
    violations: Vec<String>,
}

fn drop_one(t: &Tirp, skip: usize) -> Tirp {
    let keep: Vec<usize> = (0..t.k()).filter(|&i| i != skip).collect();
    let symbols = keep.iter().map(|&i| t.symbols()[i].clone()).collect();
    let mut relations = Vec::new();
    for (a, &i) in keep.iter().enumerate() {
        for &j in &keep[a + 1..] {
            relations.push(t.relation(i, j));
        }
    }
    Tirp::new(symbols, relations).expect("sub-pattern of a valid TIRP")
}

impl Audit {
    fn check(&mut self, out: &[MinedPattern], cfg: &MinerConfig, cohort_size: usize) {
        self.runs += 1;
        self.patterns += out.len();
        let index: HashMap<&Tirp, &SupportStats> = out.iter().map(|p| (&p.tirp, &p.stats)).collect();
        for p in out {
            if let Some(v) = p.tirp.consistency_violation(&cfg.relation) {
                self.violations.push(format!("{} violates transitivity at {v:?}", p.tirp));
            }
            if !cfg.is_frequent(p.stats.supporting_entities, cohort_size) {
                self.violations.push(format!("{} is below min support", p.tirp));
            }
            if p.tirp.k() < 2 {
                continue;
            }
            // Every sub-pattern from dropping one interval occurs wherever the
            // pattern does.
            for skip in 0..p.tirp.k() {
                let sub = drop_one(&p.tirp, skip);
                match index.get(&sub) {
                    None => self.violations.push(format!("{} mined without its sub-pattern {sub}", p.tirp)),
                    Some(s) if s.supporting_entities < p.stats.supporting_entities => {
                        self.violations.push(format!("{sub} supported less than its super-pattern {}", p.tirp))
                    }
                    Some(_) => {}
                }
            }
        }
    }
}

fn random_instance(seed: u64) -> (Vec<EntityIntervals>, usize, MinerConfig) {
    let mut rng = StdRng::seed_from_u64(seed);
    let resolver = SymbolResolver::default();
    let symbols = [("A", "Low"), ("A", "High"), ("B", "Low"), ("B", "High")]
        .map(|(c, l)| resolver.resolve(c, Kind::State, l));
    let n = rng.random_range(1..=10usize);
    let entities: Vec<EntityIntervals> = (0..n)
        .map(|e| {
            let count = rng.random_range(0..=12usize);
            let mut seen = BTreeSet::new();
            for _ in 0..count {
                let start = rng.random_range(0..60i64);
                let end = start + rng.random_range(0..20i64);
                seen.insert((start, end, rng.random_range(0..symbols.len())));
            }
            let intervals = seen
                .into_iter()
                .map(|(s, e, sym)| SymbolicInterval::new(symbols[sym].clone(), s, e))
                .collect();
            EntityIntervals::new(EntityId::from(format!("e{e:02}").as_str()), intervals)
        })
        .collect();
    let cohort_size = n + rng.random_range(0..=2usize);
    let cfg = MinerConfig {
        min_support: if seed % 2 == 0 { 0.1 } else { 0.3 },
        relation: RelationConfig { epsilon: if seed % 4 < 2 { 0 } else { 2 }, max_gap: rng.random_range(5..=40) },
        max_pattern_len: if seed % 5 == 0 { rng.random_range(1..=3) } else { 4 },
    };
    (entities, cohort_size, cfg)
}

fn oracle_equivalence(audit: &mut Audit) -> Check {
    let instances = 200u64;
    let mut patterns = 0;
    for seed in 0..instances {
        let (entities, cohort_size, cfg) = random_instance(seed);
        let mined = mine(&entities, cohort_size, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        let oracle = enumerate_bruteforce(&entities, cohort_size, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        if mined != oracle {
            let a: BTreeSet<String> = mined.iter().map(|p| format!("{} {:?}", p.tirp, p.stats)).collect();
            let b: BTreeSet<String> = oracle.iter().map(|p| format!("{} {:?}", p.tirp, p.stats)).collect();
            let extra = a.difference(&b).next();
            let missing = b.difference(&a).next();
            return Err(format!("seed {seed} differs: extra {extra:?}, missing {missing:?}"));
        }
        audit.check(&mined, &cfg, cohort_size);
        patterns += mined.len();
    }
    Ok(format!("{instances} instances, {patterns} TIRPs, 0 mismatches"))
}

fn all_intervals(max: i64) -> Vec<(i64, i64)> {
    (0..=max).flat_map(|s| (s..=max).map(move |e| (s, e))).collect()
}

fn transitivity_table() -> Check {
    let cfg = RelationConfig { epsilon: 0, max_gap: 1000 };
    let ivs = all_intervals(8);
    let mut seen = [[RelationSet::EMPTY; 7]; 7];
    for &a in &ivs {
        for &b in ivs.iter().filter(|&&b| a <= b) {
            let Some(ab) = classify(a, b, &cfg) else { continue };
            for &c in ivs.iter().filter(|&&c| b <= c) {
                let (Some(bc), Some(ac)) = (classify(b, c, &cfg), classify(a, c, &cfg)) else { continue };
                seen[ab.index()][bc.index()].insert(ac);
            }
        }
    }
    let mut mismatches = Vec::new();
    for ab in Relation::ALL {
        for bc in Relation::ALL {
            let derived = seen[ab.index()][bc.index()];
            if compose(ab, bc) != derived || derived.is_empty() {
                mismatches.push(format!("{ab}{bc}: table {:?} vs derived {derived:?}", compose(ab, bc)));
            }
        }
    }
    ensure(mismatches.is_empty(), || format!("{} mismatches: {}", mismatches.len(), mismatches.join("; ")))?;
    Ok("49/49 cells equal brute-force composition over endpoints 0..=8".into())
}

/// Every textbook relation definition that holds for `a <= b`, in the
/// precedence order used to break ties between point intervals.
fn textbook(a: (i64, i64), b: (i64, i64)) -> Vec<Relation> {
    let ((as_, ae), (bs, be)) = (a, b);
    let defs = [
        (Relation::Equals, as_ == bs && ae == be),
        (Relation::Starts, as_ == bs && ae < be),
        (Relation::FinishedBy, as_ < bs && ae == be),
        (Relation::Contains, as_ < bs && be < ae),
        (Relation::Overlaps, as_ < bs && bs < ae && ae < be),
        (Relation::Meets, ae == bs),
        (Relation::Before, ae < bs),
    ];
    defs.into_iter().filter(|d| d.1).map(|d| d.0).collect()
}

fn allen_classification() -> Check {
    let max_gap = 3;
    let cfg = RelationConfig { epsilon: 0, max_gap };
    let ivs = all_intervals(6);
    let mut pairs = 0;
    for &a in &ivs {
        for &b in ivs.iter().filter(|&&b| a <= b) {
            pairs += 1;
            let holds = textbook(a, b);
            let proper = a.0 < a.1 && b.0 < b.1;
            ensure(!holds.is_empty(), || format!("{a:?} {b:?}: no definition holds"))?;
            ensure(!proper || holds.len() == 1, || format!("{a:?} {b:?}: {holds:?} all hold"))?;
            let expected = match holds[0] {
                Relation::Before if b.0 - a.1 > max_gap => None,
                r => Some(r),
            };
            let got = classify(a, b, &cfg);
            ensure(got == expected, || format!("{a:?} {b:?}: classified {got:?}, expected {expected:?}"))?;
            ensure(classify(a, b, &cfg) == got, || format!("{a:?} {b:?}: nondeterministic"))?;
        }
    }
    Ok(format!("{pairs} ordered pairs over endpoints 0..=6 agree"))
}

fn kbta_golden() -> Check {
    golden::shipped_kb_matches_reference_table();
    golden::hand_worked_dataset();
    Ok("26 KB rows match; hand dataset byte-identical".into())
}

fn close(name: &str, got: f64, want: f64) -> Result<(), String> {
    ensure((got - want).abs() <= TOL, || format!("{name}: {got} vs {want}"))
}

fn stats_closed_forms() -> Check {
    let h = |p: f64| -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    let e = |r: Result<f64, tirp_core::Error>| r.map_err(|e| e.to_string());
    close("IG 8/10 vs 2/10", e(information_gain_counts(8, 10, 2, 10))?, 1.0 - h(0.8))?;
    close("IG universal feature", e(information_gain(&[true; 4], &["a", "a", "b", "b"]))?, 0.0)?;
    close("IG perfect separator", e(information_gain(&[true, true, false, false], &["a", "a", "b", "b"]))?, 1.0)?;

    close("KS critical D", e(ks_critical_d(0.05, 100, 100))?, 1.36 * (200.0f64 / 10000.0).sqrt())?;
    let ks = |a: &[f64], b: &[f64]| ks_two_sample(a, b, 0.05).map_err(|e| e.to_string());
    let same = ks(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0])?;
    close("KS identical", same.d_statistic, 0.0)?;
    ensure(!same.reject, || "identical samples rejected".into())?;
    close("KS disjoint", ks(&[1.0, 2.0], &[3.0, 4.0, 5.0])?.d_statistic, 1.0)?;
    close("KS hand case", ks(&[1.0, 2.0, 3.0, 4.0, 5.0], &[3.5, 6.0, 7.0])?.d_statistic, 2.0 / 3.0)?;

    let pooled: f64 = 40.0 / 200.0;
    let z_want = (0.3 - 0.1) / (pooled * (1.0 - pooled) * (2.0 / 100.0)).sqrt();
    let t = proportion_test(30, 100, 10, 100, 0.05).map_err(|e| e.to_string())?;
    close("z (30/100 vs 10/100)", t.z, z_want)?;
    ensure(t.significant, || "30/100 vs 10/100 not significant".into())?;
    close("z critical 0.05", e(z_critical(0.05))?, 1.959963984540054)?;
    for (x1, n1, x2, n2) in [(0, 50, 0, 70), (5, 50, 7, 70)] {
        let t = proportion_test(x1, n1, x2, n2, 0.05).map_err(|e| e.to_string())?;
        close("z equal proportions", t.z, 0.0)?;
        ensure(!t.significant, || format!("({x1},{n1},{x2},{n2}) significant"))?;
    }
    Ok("IG, KS and proportion-test values within 1e-9".into())
}

fn planted_cohort(seed: u64) -> SynthConfig {
    SynthConfig {
        n_case: 300,
        n_control: 300,
        concepts: vec!["BodyTemperature".into(), "HeartRate".into(), "RespiratoryRate".into()],
        planted: vec![PlantedSpec {
            tirp: "BodyTemperature.S.High|HeartRate.S.High;m".into(),
            case_rate: 0.6,
            control_rate: 0.1,
        }],
        noise_intervals_per_entity: 20.0,
        horizon: 2880,
        seed,
        sample_step: 60,
        max_noise_len: 3,
        kb: None,
        class_labels: ["case".into(), "control".into()],
    }
}

fn planted_discrimination(audit: &mut Audit) -> Check {
    let kb = KnowledgeBase::sepsis();
    let cfg = MinerConfig {
        min_support: 0.08,
        relation: RelationConfig { epsilon: 0, max_gap: 720 },
        max_pattern_len: 3,
    };
    let seeds = 20u64;
    let mut calm_within = 0;
    let mut failures = Vec::new();
    let mut worst = (f64::INFINITY, 0usize);
    for seed in 0..seeds {
        let synth = planted_cohort(seed);
        let cohort = generate(&synth, &kb).map_err(|e| e.to_string())?;
        let ids: Vec<EntityId> = cohort.labels.keys().cloned().collect();
        let (intervals, _) = abstract_all(&cohort.samples, &ids, &kb);
        let mut by_class: BTreeMap<&str, Vec<EntityIntervals>> = BTreeMap::new();
        for e in intervals {
            by_class.entry(cohort.labels[&e.entity].as_str()).or_default().push(e);
        }
        let (case, control) = (&by_class["case"], &by_class["control"]);
        let mined_case = mine(case, 300, &cfg).map_err(|e| e.to_string())?;
        let mined_control = mine(control, 300, &cfg).map_err(|e| e.to_string())?;
        audit.check(&mined_case, &cfg, 300);
        audit.check(&mined_control, &cfg, 300);
        let a = CohortData { label: "case", entities: case, cohort_size: 300, mined: &mined_case, config: &cfg };
        let b = CohortData { label: "control", entities: control, cohort_size: 300, mined: &mined_control, config: &cfg };
        let stats = StatsConfig { split_seed: seed, ..StatsConfig::default() };
        let cmp = compare_cohorts(&a, &b, &stats).map_err(|e| e.to_string())?;

        let planted = &cohort.planted[0].0;
        let support = mined_case.iter().find(|p| &p.tirp == planted).map_or(0.0, |p| p.stats.horizontal_support);
        let between = match cmp.between.iter().find(|(t, _)| t == planted) {
            Some((_, t)) => t.significant,
            None => {
                let r = cmp.ranking.iter().find(|r| r.tirp == planted.canonical_string());
                r.and_then(|r| proportion_test(r.entities_a, 300, r.entities_b, 300, stats.alpha).ok())
                    .is_some_and(|t| t.significant)
            }
        };
        let split_significant = |tests: &[(Tirp, tirp_core::stats::ProportionTestResult)]| {
            tests.iter().any(|(t, r)| t == planted && r.significant)
        };
        if !split_significant(&cmp.within_a) && !split_significant(&cmp.within_b) {
            calm_within += 1;
        }
        let rank = cmp.ranking.iter().position(|r| r.tirp == planted.canonical_string()).map(|p| p + 1);
        worst = (worst.0.min(support), worst.1.max(rank.unwrap_or(usize::MAX)));
        if support < 0.55 || !between || !rank.is_some_and(|r| r <= 5) {
            failures.push(format!("seed {seed}: support {support:.3}, between significant {between}, rank {rank:?}"));
        }
    }
    let summary = format!(
        "{seeds} seeds: min case support {:.3}, worst IG rank {}, within-class calm in {calm_within}/{seeds}",
        worst.0, worst.1
    );
    ensure(failures.is_empty(), || format!("{summary}; {}", failures.join("; ")))?;
    ensure(calm_within >= 18, || format!("{summary}; fewer than 18 calm seeds"))?;
    Ok(summary)
}

fn bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tirp-forge"))
        .args(args)
        .env_remove("TIRP_FORGE_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

const PIPELINE_FILES: [&str; 8] = [
    "data/events.csv",
    "data/labels.csv",
    "data/reference_times.csv",
    "intervals.csv",
    "mined/case.jsonl",
    "mined/control.jsonl",
    "report.json",
    "report.txt",
];

/// synth, abstract, mine, discriminate and report into `dir`; returns every
/// artifact plus the captured stdout of each step.
fn pipeline(dir: &Path, threads: &str) -> Result<Vec<(String, Vec<u8>)>, String> {
    let p = |f: &str| dir.join(f).display().to_string();
    let config = p("synth.json");
    std::fs::write(
        &config,
        r#"{"n_case":120,"n_control":120,"concepts":["BodyTemperature","HeartRate","RespiratoryRate"],
            "planted":[{"tirp":"BodyTemperature.S.High|HeartRate.S.High;m","case_rate":0.6,"control_rate":0.1}],
            "noise_intervals_per_entity":12,"horizon":2880,"seed":11}"#,
    )
    .map_err(|e| e.to_string())?;
    let t = ["--threads", threads];
    let mut stdout = Vec::new();
    let mut step = |name: &str, args: &[&str]| -> Result<(), String> {
        let full: Vec<&str> = t.iter().chain(args).copied().collect();
        // Summaries name output files; the run directory is not part of the result.
        let text = String::from_utf8_lossy(&bin(&full)?).replace(&dir.display().to_string(), "<run>");
        stdout.push((format!("{name} stdout"), text.into_bytes()));
        Ok(())
    };
    step("synth", &["synth", "--config", &config, "--out-dir", &p("data")])?;
    step(
        "abstract",
        &["abstract", "--events", &p("data/events.csv"), "--windows", &p("data/reference_times.csv"),
          "--window-min", "2880", "--out", &p("intervals.csv")],
    )?;
    step(
        "mine",
        &["mine", "--intervals", &p("intervals.csv"), "--labels", &p("data/labels.csv"), "--min-support", "0.1",
          "--max-len", "3", "--out-dir", &p("mined")],
    )?;
    step(
        "discriminate",
        &["discriminate", "--mined-a", &p("mined/case.jsonl"), "--mined-b", &p("mined/control.jsonl"),
          "--labels", &p("data/labels.csv"), "--intervals", &p("intervals.csv"), "--split-seed", "5",
          "--out", &p("report.json")],
    )?;
    let table = bin(&["report", "--in", &p("report.json"), "--top", "10"])?;
    std::fs::write(p("report.txt"), &table).map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for f in PIPELINE_FILES {
        files.push((f.to_string(), std::fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}"))?));
    }
    files.extend(stdout);
    Ok(files)
}

fn same_bytes(a: &[(String, Vec<u8>)], b: &[(String, Vec<u8>)], what: &str) -> Result<(), String> {
    ensure(a.len() == b.len(), || format!("{what}: artifact counts differ"))?;
    for ((name, x), (_, y)) in a.iter().zip(b) {
        ensure(x == y, || format!("{what}: {name} differs"))?;
    }
    Ok(())
}

fn determinism(dirs: &[PathBuf; 3], audit: &mut Audit) -> Check {
    let first = pipeline(&dirs[0], "1")?;
    let again = pipeline(&dirs[1], "1")?;
    let wide = pipeline(&dirs[2], "8")?;
    same_bytes(&first, &again, "rerun")?;
    same_bytes(&first, &wide, "--threads 1 vs 8")?;
    for class in ["case", "control"] {
        let m = load_mining(dirs[0].join(format!("mined/{class}.jsonl")), SymbolResolver::default())
            .map_err(|e| e.to_string())?;
        audit.check(&m.patterns, &m.header.config, m.header.cohort_size);
    }
    Ok(format!("{} artifacts byte-identical across 2 runs and --threads 1 vs 8", first.len()))
}

fn report_shape(dir: &Path) -> Check {
    let text = std::fs::read_to_string(dir.join("report.json")).map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let rows = json["proportion_tests"].as_array().ok_or("no proportion_tests array")?;
    ensure(rows.len() == 3, || format!("{} proportion-test rows", rows.len()))?;
    let descriptions = ["case vs. control", "Only case (50% vs. 50%)", "Only control (50% vs. 50%)"];
    for (row, want) in rows.iter().zip(descriptions) {
        let keys: BTreeSet<&str> = row.as_object().ok_or("row is not an object")?.keys().map(String::as_str).collect();
        ensure(keys == BTreeSet::from(["description", "tested", "different", "percent"]), || format!("row keys {keys:?}"))?;
        ensure(row["description"] == want, || format!("row {} should be {want}", row["description"]))?;
        let (t, d, p) = (row["tested"].as_u64(), row["different"].as_u64(), row["percent"].as_u64());
        let (Some(t), Some(d), Some(p)) = (t, d, p) else { return Err(format!("non-integer cells in {row}")) };
        let want_p = if t == 0 { 0 } else { (100.0 * d as f64 / t as f64).round() as u64 };
        ensure(p == want_p, || format!("{want}: percent {p}, round(100*{d}/{t}) = {want_p}"))?;
    }
    let table = std::fs::read_to_string(dir.join("report.txt")).map_err(|e| e.to_string())?;
    let header = table.lines().find(|l| l.starts_with("Test description")).ok_or("no proportion table")?;
    ensure(header.split_whitespace().skip(2).eq(["Tested", "Different", "Percent"]), || header.to_string())?;
    let body = table.lines().skip_while(|l| !l.starts_with("Test description")).skip(1).count();
    ensure(body == 3, || format!("{body} rows in the printed table"))?;
    Ok(rows.iter().map(|r| format!("{}: {}/{} = {}%", r["description"], r["different"], r["tested"], r["percent"])).collect::<Vec<_>>().join("; "))
}

fn main() {
    let mut audit = Audit::default();
    let tmp = tempfile::tempdir().expect("temp dir");
    let dirs = [tmp.path().join("run1"), tmp.path().join("run2"), tmp.path().join("threads8")];
    for d in &dirs {
        std::fs::create_dir_all(d).expect("run dir");
    }

    let mut lines = vec![
        run(1, "oracle equivalence", Some(Duration::from_secs(120)), || oracle_equivalence(&mut audit)),
        run(2, "transitivity table", Some(Duration::from_secs(10)), transitivity_table),
        run(3, "Allen classification", None, allen_classification),
        run(4, "KBTA golden", None, kbta_golden),
        run(5, "statistics closed forms", None, stats_closed_forms),
        run(6, "planted-pattern discrimination", Some(Duration::from_secs(300)), || planted_discrimination(&mut audit)),
        run(8, "end-to-end determinism", None, || determinism(&dirs, &mut audit)),
        run(9, "report shape", None, || report_shape(&dirs[0])),
    ];
    let seven = run(7, "anti-monotonicity and consistency", None, || {
        ensure(audit.runs > 0, || "no mining output audited".into())?;
        ensure(audit.violations.is_empty(), || {
            format!("{} violations, first: {}", audit.violations.len(), audit.violations[0])
        })?;
        Ok(format!("{} TIRPs from {} mining runs, 0 violations", audit.patterns, audit.runs))
    });
    lines.push(seven);
    lines.sort_by_key(|l| l.id);

    let mut failed = 0;
    for l in &lines {
        println!("{} {}. {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.name, l.detail);
        failed += usize::from(!l.pass);
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
