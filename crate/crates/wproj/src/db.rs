//! Line-delimited persistence and batch processing of moduli-point
//! collections: ingestion with per-record validation, canonicalization,
//! twist grouping, dedup, and height-sorted export.
//!
//! The on-disk format is one JSON object per line (UTF-8, LF). Coordinates
//! are decimal strings so arbitrary precision survives any tool in the
//! pipeline; unknown fields round-trip unchanged. Derived fields are
//! recomputed on ingest and must agree with what is stored.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::height::{cmp_height, HeightValue};
use crate::moduli;
use crate::normal::{canonical, Mode};
use crate::tuple::{WeightedTuple, Weights};

/// Serialized exact height: decimal base, integer root, display approx.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HeightJson {
    pub base: String,
    pub root: u32,
    pub approx: f64,
}

impl HeightJson {
    fn of(h: &HeightValue) -> Self {
        HeightJson {
            base: h.base().to_string(),
            root: h.root(),
            approx: h.approx(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct DerivedJson {
    canonical: Vec<String>,
    height: HeightJson,
    abs_height: HeightJson,
    twist_key: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawRecord {
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u32>>,
    coords: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derived: Option<DerivedJson>,
    #[serde(flatten)]
    extra: BTreeMap<String, Value>,
}

/// Fields recomputable from the coordinates and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Derived {
    pub canonical: Vec<BigInt>,
    pub height: HeightValue,
    pub abs_height: HeightValue,
    /// Serialized canonical absolute form; equal keys mean the records
    /// are equivalent over the algebraic closure.
    pub twist_key: String,
}

/// A labeled, persisted moduli point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub label: String,
    pub preset: Option<String>,
    pub tuple: WeightedTuple,
    pub derived: Derived,
    pub extra: BTreeMap<String, Value>,
}

fn compute_derived(t: &WeightedTuple) -> Derived {
    let rat = canonical(t, Mode::Rational);
    let abs = canonical(t, Mode::Absolute);
    let height = crate::height::height(t);
    let abs_height = crate::height::abs_height(t);
    let weights: Vec<String> = t.weights().as_slice().iter().map(|w| w.to_string()).collect();
    let abs_coords: Vec<String> = abs.tuple.coords().iter().map(|c| c.to_string()).collect();
    Derived {
        canonical: rat.tuple.coords().to_vec(),
        height,
        abs_height,
        twist_key: format!("w={};p={}", weights.join(","), abs_coords.join(",")),
    }
}

/// Ingestion outcome: per-reason rejection counts plus flags.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: BTreeMap<String, usize>,
    pub duplicate_labels: usize,
}

/// An in-memory, ordered collection of records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Collection {
    records: Vec<PointRecord>,
}

fn reason_of(e: &Error) -> &'static str {
    match e {
        Error::InvalidWeights => "invalid-weights",
        Error::ZeroTuple => "zero-tuple",
        Error::ArityMismatch { .. } => "arity-mismatch",
        Error::UnknownPreset(_) => "unknown-preset",
        Error::DegenerateModuli { .. } => "degenerate-moduli",
        _ => "invalid-record",
    }
}

fn parse_record(line: &str) -> Result<PointRecord, &'static str> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|_| "parse-error")?;
    let mut coords = Vec::with_capacity(raw.coords.len());
    for c in &raw.coords {
        coords.push(c.parse::<BigInt>().map_err(|_| "bad-coordinate")?);
    }
    let tuple = match (&raw.preset, &raw.weights) {
        (Some(name), _) => {
            let p = moduli::preset(name).map_err(|e| reason_of(&e))?;
            if let Some(w) = &raw.weights {
                if w != p.weights().as_slice() {
                    return Err("weights-mismatch");
                }
            }
            moduli::moduli_point(&p, coords).map_err(|e| reason_of(&e))?
        }
        (None, Some(w)) => {
            let weights = Weights::new(w.clone()).map_err(|e| reason_of(&e))?;
            WeightedTuple::new(weights, coords).map_err(|e| reason_of(&e))?
        }
        (None, None) => return Err("missing-weights"),
    };
    let derived = compute_derived(&tuple);
    if let Some(stored) = &raw.derived {
        let fresh = derived_json(&derived);
        if stored.canonical != fresh.canonical
            || stored.height.base != fresh.height.base
            || stored.height.root != fresh.height.root
            || stored.abs_height.base != fresh.abs_height.base
            || stored.abs_height.root != fresh.abs_height.root
            || stored.twist_key != fresh.twist_key
        {
            return Err("derived-mismatch");
        }
    }
    Ok(PointRecord {
        label: raw.label,
        preset: raw.preset,
        tuple,
        derived,
        extra: raw.extra,
    })
}

fn derived_json(d: &Derived) -> DerivedJson {
    DerivedJson {
        canonical: d.canonical.iter().map(|c| c.to_string()).collect(),
        height: HeightJson::of(&d.height),
        abs_height: HeightJson::of(&d.abs_height),
        twist_key: d.twist_key.clone(),
    }
}

/// Reads line-delimited records; malformed lines are rejected per record
/// and processing continues.
pub fn ingest<R: BufRead>(reader: R) -> io::Result<(Collection, IngestReport)> {
    let mut lines = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push(line);
        }
    }
    let parsed: Vec<Result<PointRecord, &'static str>> = {
        #[cfg(feature = "parallel")]
        {
            lines.par_iter().map(|l| parse_record(l)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            lines.iter().map(|l| parse_record(l)).collect()
        }
    };
    let mut report = IngestReport::default();
    let mut records = Vec::new();
    let mut seen_labels: BTreeMap<String, usize> = BTreeMap::new();
    for item in parsed {
        match item {
            Ok(rec) => {
                let n = seen_labels.entry(rec.label.clone()).or_insert(0);
                if *n > 0 {
                    report.duplicate_labels += 1;
                }
                *n += 1;
                report.accepted += 1;
                records.push(rec);
            }
            Err(reason) => {
                *report.rejected.entry(reason.to_string()).or_insert(0) += 1;
            }
        }
    }
    Ok((Collection { records }, report))
}

impl Collection {
    pub fn from_records(records: Vec<PointRecord>) -> Self {
        Collection { records }
    }

    pub fn records(&self) -> &[PointRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn rational_key(rec: &PointRecord) -> String {
        let coords: Vec<String> = rec.derived.canonical.iter().map(|c| c.to_string()).collect();
        let weights: Vec<String> = rec
            .tuple
            .weights()
            .as_slice()
            .iter()
            .map(|w| w.to_string())
            .collect();
        format!("w={};p={}", weights.join(","), coords.join(","))
    }

    /// Keeps one record per equivalence class. Rational mode keeps the
    /// first record of each canonical rational form; absolute mode keeps,
    /// per twist key, the member with minimal height (ties broken by
    /// lexicographic coordinates, then label).
    pub fn dedupe(&self, mode: Mode) -> Collection {
        match mode {
            Mode::Rational => {
                let mut seen = std::collections::BTreeSet::new();
                let records = self
                    .records
                    .iter()
                    .filter(|r| seen.insert(Self::rational_key(r)))
                    .cloned()
                    .collect();
                Collection { records }
            }
            Mode::Absolute => {
                let mut order: Vec<String> = Vec::new();
                let mut best: BTreeMap<String, &PointRecord> = BTreeMap::new();
                for rec in &self.records {
                    let key = &rec.derived.twist_key;
                    match best.get(key.as_str()) {
                        None => {
                            order.push(key.clone());
                            best.insert(key.clone(), rec);
                        }
                        Some(cur) => {
                            let better = cmp_height(&rec.derived.height, &cur.derived.height)
                                .then_with(|| {
                                    rec.derived.canonical.cmp(&cur.derived.canonical)
                                })
                                .then_with(|| rec.label.cmp(&cur.label))
                                .is_lt();
                            if better {
                                best.insert(key.clone(), rec);
                            }
                        }
                    }
                }
                let records = order
                    .iter()
                    .map(|k| (*best.get(k).expect("inserted above")).clone())
                    .collect();
                Collection { records }
            }
        }
    }

    /// Stable ascending sort by exact height; ties by lexicographic
    /// canonical coordinates, then label.
    pub fn sort_by_height(&self, which: Mode) -> Collection {
        let mut records = self.records.clone();
        records.sort_by(|a, b| {
            let (ha, hb) = match which {
                Mode::Rational => (&a.derived.height, &b.derived.height),
                Mode::Absolute => (&a.derived.abs_height, &b.derived.abs_height),
            };
            cmp_height(ha, hb)
                .then_with(|| a.derived.canonical.cmp(&b.derived.canonical))
                .then_with(|| a.label.cmp(&b.label))
        });
        Collection { records }
    }

    /// Partitions records by twist key, in first-seen order.
    pub fn twist_groups(&self) -> Vec<TwistGroup> {
        let mut order: Vec<String> = Vec::new();
        let mut groups: BTreeMap<String, TwistGroup> = BTreeMap::new();
        for rec in &self.records {
            let key = rec.derived.twist_key.clone();
            let entry = groups.entry(key.clone()).or_insert_with(|| {
                order.push(key.clone());
                TwistGroup {
                    twist_key: key.clone(),
                    representative: canonical(&rec.tuple, Mode::Absolute).tuple.coords().to_vec(),
                    members: Vec::new(),
                }
            });
            entry.members.push(rec.label.clone());
        }
        order
            .into_iter()
            .map(|k| groups.remove(&k).expect("inserted above"))
            .collect()
    }

    /// Writes one JSON object per line with the derived block included.
    pub fn export<W: Write>(&self, mut w: W) -> io::Result<()> {
        for rec in &self.records {
            let raw = RawRecord {
                label: rec.label.clone(),
                preset: rec.preset.clone(),
                weights: if rec.preset.is_some() {
                    None
                } else {
                    Some(rec.tuple.weights().as_slice().to_vec())
                },
                coords: rec.tuple.coords().iter().map(|c| c.to_string()).collect(),
                derived: Some(derived_json(&rec.derived)),
                extra: rec.extra.clone(),
            };
            serde_json::to_writer(&mut w, &raw)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Atomic save: writes to a sibling temporary file, then renames.
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let tmp = dir.join(format!(
            ".{}.tmp",
            path.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "wpdb".to_string())
        ));
        {
            let file = std::fs::File::create(&tmp)?;
            let mut buf = io::BufWriter::new(file);
            self.export(&mut buf)?;
        }
        std::fs::rename(&tmp, path)
    }
}

/// One Q̄-equivalence class of records with its minimal absolute
/// representative.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistGroup {
    pub twist_key: String,
    pub representative: Vec<BigInt>,
    pub members: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(label: &str, coords: &[i64]) -> String {
        let cs: Vec<String> = coords.iter().map(|c| format!("\"{}\"", c)).collect();
        format!(
            "{{\"label\":\"{}\",\"preset\":\"genus2-igusa\",\"coords\":[{}]}}",
            label,
            cs.join(",")
        )
    }

    fn example6_family() -> String {
        [
            line("p", &[240, 1620, 119_880, 46_656]),
            line("p1", &[120, 405, 14_985, 1_458]),
            line("p2", &[80, 180, 4_440, 192]),
            line("pbar", &[40, 45, 555, 6]),
        ]
        .join("\n")
    }

    #[test]
    fn ingest_accepts_and_rejects() {
        let input = format!(
            "{}\n{}\nnot json\n{}\n",
            line("p", &[240, 1620, 119_880, 46_656]),
            line("bad", &[1, 2, 3, 0]),
            line("p", &[240, 1620, 119_880, 46_656]),
        );
        let (col, report) = ingest(input.as_bytes()).unwrap();
        assert_eq!(report.accepted, 2);
        assert_eq!(report.rejected.get("degenerate-moduli"), Some(&1));
        assert_eq!(report.rejected.get("parse-error"), Some(&1));
        assert_eq!(report.duplicate_labels, 1);
        assert_eq!(col.len(), 2);
        assert_eq!(col.records()[0].derived.height.base().to_string(), "240");
        assert_eq!(col.records()[0].derived.height.root(), 2);
    }

    #[test]
    fn dedupe_modes() {
        let (col, _) = ingest(example6_family().as_bytes()).unwrap();
        let rational = col.dedupe(Mode::Rational);
        assert_eq!(rational.len(), 4); // four distinct rational points
        let absolute = col.dedupe(Mode::Absolute);
        assert_eq!(absolute.len(), 1);
        assert_eq!(absolute.records()[0].label, "pbar");
        // idempotence
        assert_eq!(absolute.dedupe(Mode::Absolute), absolute);

        // sign twins collapse in rational mode
        let twins = format!(
            "{}\n{}\n",
            line("a", &[3, 5, 7, 11]),
            line("b", &[-3, 5, -7, -11]),
        );
        let (col, _) = ingest(twins.as_bytes()).unwrap();
        assert_eq!(col.dedupe(Mode::Rational).len(), 1);
    }

    #[test]
    fn sort_by_rational_height() {
        let (col, _) = ingest(example6_family().as_bytes()).unwrap();
        let sorted = col.sort_by_height(Mode::Rational);
        let labels: Vec<&str> = sorted.records().iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["pbar", "p2", "p1", "p"]);

        assert!(Collection::default().sort_by_height(Mode::Rational).is_empty());

        // equal heights: label tie-break
        let ties = format!("{}\n{}\n", line("b", &[3, 5, 7, 11]), line("a", &[-3, 5, -7, -11]));
        let (col, _) = ingest(ties.as_bytes()).unwrap();
        let sorted = col.sort_by_height(Mode::Rational);
        assert_eq!(sorted.records()[0].label, "a");
    }

    #[test]
    fn twist_grouping() {
        let (col, _) = ingest(example6_family().as_bytes()).unwrap();
        let groups = col.twist_groups();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].members, vec!["p", "p1", "p2", "pbar"]);
        let rep: Vec<String> = groups[0].representative.iter().map(|c| c.to_string()).collect();
        assert_eq!(rep, vec!["40", "45", "555", "6"]);

        let two = format!(
            "{}\n{}\n",
            line("x", &[3, 5, 7, 11]),
            line("y", &[1, 1, 1, 1]),
        );
        let (col, _) = ingest(two.as_bytes()).unwrap();
        assert_eq!(col.twist_groups().len(), 2);
    }

    #[test]
    fn export_round_trip_is_byte_identical() {
        let with_extra = format!(
            "{{\"label\":\"e\",\"weights\":[1,2],\"coords\":[\"3\",\"4\"],\"note\":\"kept\"}}\n{}",
            example6_family()
        );
        let (col, _) = ingest(with_extra.as_bytes()).unwrap();
        let mut first = Vec::new();
        col.export(&mut first).unwrap();
        let (col2, report2) = ingest(first.as_slice()).unwrap();
        assert_eq!(report2.accepted, 5);
        assert!(report2.rejected.is_empty());
        let mut second = Vec::new();
        col2.export(&mut second).unwrap();
        assert_eq!(first, second);
        assert!(String::from_utf8(second).unwrap().contains("\"note\":\"kept\""));
    }

    #[test]
    fn derived_mismatch_is_rejected() {
        let bogus = "{\"label\":\"z\",\"weights\":[1,2],\"coords\":[\"3\",\"4\"],\
                     \"derived\":{\"canonical\":[\"9\",\"9\"],\
                     \"height\":{\"base\":\"4\",\"root\":2,\"approx\":2.0},\
                     \"abs_height\":{\"base\":\"4\",\"root\":2,\"approx\":2.0},\
                     \"twist_key\":\"nope\"}}";
        let (col, report) = ingest(bogus.as_bytes()).unwrap();
        assert!(col.is_empty());
        assert_eq!(report.rejected.get("derived-mismatch"), Some(&1));
    }

    #[test]
    fn atomic_save_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.wpdb");
        let (col, _) = ingest(example6_family().as_bytes()).unwrap();
        col.save(&path).unwrap();
        let file = std::fs::File::open(&path).unwrap();
        let (col2, report) = ingest(io::BufReader::new(file)).unwrap();
        assert_eq!(report.accepted, 4);
        assert_eq!(col2.len(), col.len());
    }
}
