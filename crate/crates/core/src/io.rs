//! CSV readers and writers for events, labels, reference times and intervals.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;
use std::sync::Arc;

use chrono::DateTime;

use crate::error::{Error, Result};
use crate::model::{EntityId, EntityIntervals, Kind, Sample, SymbolResolver, SymbolicInterval, Time};

pub const EVENTS_HEADER: [&str; 4] = ["entity_id", "concept", "timestamp", "value"];
pub const LABELS_HEADER: [&str; 2] = ["entity_id", "class"];
pub const REFERENCE_TIMES_HEADER: [&str; 3] = ["entity_id", "admission_time", "reference_time"];
pub const INTERVALS_HEADER: [&str; 6] = ["entity_id", "concept", "kind", "label", "start", "end"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeFormat {
    /// RFC 3339 strings, converted to minutes from an epoch.
    Rfc3339,
    /// Integer minutes, used as-is.
    #[default]
    Minutes,
}

impl std::str::FromStr for TimeFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rfc3339" => Ok(TimeFormat::Rfc3339),
            "minutes" => Ok(TimeFormat::Minutes),
            _ => Err(format!("unknown time format {s:?} (expected rfc3339 or minutes)")),
        }
    }
}

/// How raw timestamps map to internal minutes.
///
/// For RFC 3339 input the epoch is the earliest event timestamp unless one is
/// set explicitly; the same base must be used for the reference-times file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TimeBase {
    pub format: TimeFormat,
    /// Unix seconds of minute zero (RFC 3339 only).
    pub epoch_secs: Option<i64>,
}

impl TimeBase {
    pub fn minutes() -> Self {
        TimeBase::default()
    }

    fn minutes_of(self, raw: &RawTime) -> Time {
        match *raw {
            RawTime::Minutes(m) => m,
            RawTime::UnixSecs(s) => (s - self.epoch_secs.unwrap_or(0)).div_euclid(60),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum RawTime {
    Minutes(i64),
    UnixSecs(i64),
}

fn parse_time(field: &str, format: TimeFormat) -> std::result::Result<RawTime, String> {
    match format {
        TimeFormat::Minutes => field
            .trim()
            .parse::<i64>()
            .map(RawTime::Minutes)
            .map_err(|_| format!("timestamp {field:?} is not integer minutes")),
        TimeFormat::Rfc3339 => DateTime::parse_from_rfc3339(field.trim())
            .map(|dt| RawTime::UnixSecs(dt.timestamp()))
            .map_err(|e| format!("timestamp {field:?} is not RFC 3339: {e}")),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, context: &str, expected: &[&str]) -> Result<()> {
    let header = rdr
        .headers()
        .map_err(|e| Error::parse(context, 1, e.to_string()))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(
            context,
            1,
            format!("expected header `{}`, found `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn records<'a, R: Read + 'a>(
    rdr: &'a mut csv::Reader<R>,
    context: &str,
) -> impl Iterator<Item = Result<(u64, csv::StringRecord)>> + 'a {
    let context = context.to_string();
    rdr.records().map(move |rec| {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(&context, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        Ok((line, rec))
    })
}

/// Parsed event log plus the time base used to convert its timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    /// Sorted by (entity, concept, t).
    pub samples: Vec<Sample>,
    pub time_base: TimeBase,
}

impl EventLog {
    pub fn entities(&self) -> BTreeSet<EntityId> {
        self.samples.iter().map(|s| s.entity.clone()).collect()
    }
}

pub fn load_events(path: impl AsRef<Path>, format: TimeFormat) -> Result<EventLog> {
    let path = path.as_ref();
    read_events(open(path)?, &path.display().to_string(), format, None)
}

/// Reads an events CSV. `epoch_secs` overrides the RFC 3339 epoch.
pub fn read_events<R: Read>(
    reader: R,
    context: &str,
    format: TimeFormat,
    epoch_secs: Option<i64>,
) -> Result<EventLog> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, context, &EVENTS_HEADER)?;

    let mut interner: HashMap<String, Arc<str>> = HashMap::new();
    let mut intern = |s: &str| -> Arc<str> {
        interner
            .entry(s.to_string())
            .or_insert_with(|| Arc::from(s))
            .clone()
    };

    let mut rows = Vec::new();
    for item in records(&mut rdr, context) {
        let (line, rec) = item?;
        if rec.len() != 4 {
            return Err(Error::parse(context, line, format!("expected 4 fields, found {}", rec.len())));
        }
        let entity = &rec[0];
        let concept = &rec[1];
        if entity.is_empty() || concept.is_empty() {
            return Err(Error::parse(context, line, "empty entity_id or concept"));
        }
        let raw = parse_time(&rec[2], format).map_err(|m| Error::parse(context, line, m))?;
        let value: f64 = rec[3]
            .parse()
            .map_err(|_| Error::parse(context, line, format!("value {:?} is not a number", &rec[3])))?;
        if !value.is_finite() {
            return Err(Error::parse(context, line, format!("value {:?} is not finite", &rec[3])));
        }
        rows.push((line, intern(entity), intern(concept), raw, value));
    }

    let epoch_secs = match format {
        TimeFormat::Minutes => None,
        TimeFormat::Rfc3339 => epoch_secs.or_else(|| {
            rows.iter()
                .filter_map(|r| match r.3 {
                    RawTime::UnixSecs(s) => Some(s),
                    RawTime::Minutes(_) => None,
                })
                .min()
                .map(|s| s - s.rem_euclid(60))
        }),
    };
    let time_base = TimeBase { format, epoch_secs };

    let mut seen: HashMap<(Arc<str>, Arc<str>, Time), u64> = HashMap::new();
    let mut samples = Vec::with_capacity(rows.len());
    for (line, entity, concept, raw, value) in rows {
        let t = time_base.minutes_of(&raw);
        if let Some(&first_line) = seen.get(&(entity.clone(), concept.clone(), t)) {
            return Err(Error::DuplicateSample {
                context: context.to_string(),
                entity: entity.to_string(),
                concept: concept.to_string(),
                t,
                first_line,
                second_line: line,
            });
        }
        seen.insert((entity.clone(), concept.clone(), t), line);
        samples.push(Sample { entity, concept, t, value });
    }
    samples.sort_by(|a, b| {
        a.entity
            .cmp(&b.entity)
            .then_with(|| a.concept.cmp(&b.concept))
            .then(a.t.cmp(&b.t))
    });
    Ok(EventLog { samples, time_base })
}

/// Writes samples with integer-minute timestamps.
pub fn write_events<W: Write>(writer: W, samples: &[Sample]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wrap_csv(wtr.write_record(EVENTS_HEADER))?;
    for s in samples {
        wrap_csv(wtr.write_record([&*s.entity, &*s.concept, &s.t.to_string(), &s.value.to_string()]))?;
    }
    wrap_csv(wtr.flush().map_err(csv::Error::from))
}

fn wrap_csv<T>(r: std::result::Result<T, csv::Error>) -> Result<T> {
    r.map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<output>", io),
        other => Error::Internal(format!("csv write failed: {other:?}")),
    })
}

/// Entity to class label.
pub type Labels = BTreeMap<EntityId, String>;

pub fn load_labels(path: impl AsRef<Path>) -> Result<Labels> {
    let path = path.as_ref();
    read_labels(open(path)?, &path.display().to_string())
}

pub fn read_labels<R: Read>(reader: R, context: &str) -> Result<Labels> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, context, &LABELS_HEADER)?;
    let mut labels = Labels::new();
    for item in records(&mut rdr, context) {
        let (line, rec) = item?;
        if rec.len() != 2 || rec[0].is_empty() || rec[1].is_empty() {
            return Err(Error::parse(context, line, "expected `entity_id,class`"));
        }
        let entity: EntityId = rec[0].into();
        if let Some(prev) = labels.insert(entity.clone(), rec[1].to_string()) {
            if prev != rec[1] {
                return Err(Error::parse(context, line, format!("entity {entity:?} labeled both {prev:?} and {:?}", &rec[1])));
            }
        }
    }
    Ok(labels)
}

pub fn write_labels<W: Write>(writer: W, labels: &Labels) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wrap_csv(wtr.write_record(LABELS_HEADER))?;
    for (entity, class) in labels {
        wrap_csv(wtr.write_record([&**entity, class.as_str()]))?;
    }
    wrap_csv(wtr.flush().map_err(csv::Error::from))
}

/// Admission and reference (window end) time of one entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceTimes {
    pub admission: Time,
    pub reference: Time,
}

pub fn load_reference_times(path: impl AsRef<Path>, base: TimeBase) -> Result<BTreeMap<EntityId, ReferenceTimes>> {
    let path = path.as_ref();
    read_reference_times(open(path)?, &path.display().to_string(), base)
}

pub fn read_reference_times<R: Read>(
    reader: R,
    context: &str,
    base: TimeBase,
) -> Result<BTreeMap<EntityId, ReferenceTimes>> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, context, &REFERENCE_TIMES_HEADER)?;
    let mut out = BTreeMap::new();
    for item in records(&mut rdr, context) {
        let (line, rec) = item?;
        if rec.len() != 3 || rec[0].is_empty() {
            return Err(Error::parse(context, line, "expected `entity_id,admission_time,reference_time`"));
        }
        let admission = parse_time(&rec[1], base.format).map_err(|m| Error::parse(context, line, m))?;
        let reference = parse_time(&rec[2], base.format).map_err(|m| Error::parse(context, line, m))?;
        let times = ReferenceTimes {
            admission: base.minutes_of(&admission),
            reference: base.minutes_of(&reference),
        };
        if times.reference < times.admission {
            return Err(Error::parse(context, line, "reference_time precedes admission_time"));
        }
        if out.insert(EntityId::from(&rec[0]), times).is_some() {
            return Err(Error::parse(context, line, format!("entity {:?} listed twice", &rec[0])));
        }
    }
    Ok(out)
}

pub fn write_reference_times<W: Write>(writer: W, times: &BTreeMap<EntityId, ReferenceTimes>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wrap_csv(wtr.write_record(REFERENCE_TIMES_HEADER))?;
    for (entity, t) in times {
        wrap_csv(wtr.write_record([&**entity, &t.admission.to_string(), &t.reference.to_string()]))?;
    }
    wrap_csv(wtr.flush().map_err(csv::Error::from))
}

/// One concept per line; blank lines and `#` comments are ignored.
pub fn load_concept_list(path: impl AsRef<Path>) -> Result<BTreeSet<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

pub fn write_intervals<W: Write>(writer: W, entities: &[EntityIntervals]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wrap_csv(wtr.write_record(INTERVALS_HEADER))?;
    for e in entities {
        for iv in &e.intervals {
            wrap_csv(wtr.write_record([
                &*e.entity,
                iv.symbol.concept(),
                iv.symbol.kind().name(),
                iv.symbol.label(),
                &iv.start.to_string(),
                &iv.end.to_string(),
            ]))?;
        }
    }
    wrap_csv(wtr.flush().map_err(csv::Error::from))
}

pub fn load_intervals(path: impl AsRef<Path>, resolver: SymbolResolver<'_>) -> Result<Vec<EntityIntervals>> {
    let path = path.as_ref();
    read_intervals(open(path)?, &path.display().to_string(), resolver)
}

/// Reads an intervals CSV, grouped by entity (sorted by entity id).
pub fn read_intervals<R: Read>(
    reader: R,
    context: &str,
    resolver: SymbolResolver<'_>,
) -> Result<Vec<EntityIntervals>> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, context, &INTERVALS_HEADER)?;
    let mut grouped: BTreeMap<EntityId, Vec<SymbolicInterval>> = BTreeMap::new();
    let mut symbols = HashMap::new();
    for item in records(&mut rdr, context) {
        let (line, rec) = item?;
        if rec.len() != 6 {
            return Err(Error::parse(context, line, format!("expected 6 fields, found {}", rec.len())));
        }
        let kind = Kind::parse(&rec[2]).ok_or_else(|| Error::parse(context, line, format!("unknown kind {:?}", &rec[2])))?;
        let key = (rec[1].to_string(), kind, rec[3].to_string());
        let symbol = match symbols.get(&key) {
            Some(s) => Clone::clone(s),
            None => {
                crate::model::validate_concept_name(&rec[1]).map_err(|m| Error::parse(context, line, m))?;
                if rec[3].is_empty() {
                    return Err(Error::parse(context, line, "empty label"));
                }
                let s = resolver.resolve(&rec[1], kind, &rec[3]);
                symbols.insert(key, s.clone());
                s
            }
        };
        let start: Time = rec[4].parse().map_err(|_| Error::parse(context, line, format!("bad start {:?}", &rec[4])))?;
        let end: Time = rec[5].parse().map_err(|_| Error::parse(context, line, format!("bad end {:?}", &rec[5])))?;
        if start > end {
            return Err(Error::parse(context, line, format!("start {start} after end {end}")));
        }
        grouped
            .entry(EntityId::from(&rec[0]))
            .or_default()
            .push(SymbolicInterval::new(symbol, start, end));
    }
    Ok(grouped
        .into_iter()
        .map(|(entity, ivs)| EntityIntervals::new(entity, ivs))
        .collect())
}

/// Creates parent directories as needed.
pub fn create_file(path: impl AsRef<Path>) -> Result<io::BufWriter<File>> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}
