//! Refractive index and Abbe number: plausibility screening, blacklist,
//! the single-n rule, wavelength standardization and generic-column
//! resolution.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;

use crate::dataset::{format_number, DatasetReader, Record, Schema};
use crate::dictionary::{ColumnClass, CurationDictionary, Target, WavelengthTarget, ABBE_COLUMN};
use crate::error::{Error, Result};
use crate::parts::{input_fingerprint, merge_parts, run_parts, ContributionsReport, PartPlan};
use crate::tabular::{normalize_text, CompoundLexicon};
use crate::{PATENT_ID, UNIT};

pub const OPTICS_FILE: &str = "optics.csv";
pub const CURATION_QUEUE: &str = "curation_queue.txt";
pub const CONTRIBUTIONS_FILE: &str = "contributions_by_patent.csv";

/// Returned by [`merged_refractive_marker`] when a row has several n values.
pub const AMBIGUOUS: f64 = -1.0;

/// n values must lie in (1, 5].
pub fn is_plausible_n(v: f64) -> bool {
    v > 1.0 && v <= 5.0
}

/// A column is n-like when every non-zero value is plausible.
pub fn plausible_column(values: impl IntoIterator<Item = f64>) -> bool {
    values.into_iter().filter(|v| *v != 0.0).all(is_plausible_n)
}

pub fn is_abbe_label(label: &str) -> bool {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"abbe|ν|\bv\s*d\b|\bnu\s*d\b").expect("static regex"))
        .is_match(&normalize_text(label))
}

/// Labels of plausible n columns among `labels`; Abbe columns are kept
/// whatever their values.
pub fn plausible_n_columns<'a>(
    labels: &'a [String],
    columns: &[Vec<f64>],
) -> Vec<&'a str> {
    labels
        .iter()
        .zip(columns)
        .filter(|(l, c)| is_abbe_label(l) || plausible_column(c.iter().copied()))
        .map(|(l, _)| l.as_str())
        .collect()
}

/// Drops blacklisted labels, keeping order.
pub fn apply_blacklist<'a>(labels: &[&'a str], dict: &CurationDictionary) -> Vec<&'a str> {
    labels
        .iter()
        .copied()
        .filter(|l| !dict.is_blacklisted(l))
        .collect()
}

/// The single non-zero candidate, [`AMBIGUOUS`] for several, `None` for none.
pub fn merged_refractive_marker(candidates: &[f64]) -> Option<f64> {
    let mut nonzero = candidates.iter().copied().filter(|v| *v != 0.0);
    match (nonzero.next(), nonzero.next()) {
        (None, _) => None,
        (Some(v), None) => Some(v),
        _ => Some(AMBIGUOUS),
    }
}

/// Wavelength read off the label itself: `nd`, `n_f`, `n (589.3 nm)`...
pub fn declared_wavelength(label: &str) -> Option<WavelengthTarget> {
    static LINE: OnceLock<Regex> = OnceLock::new();
    static NM: OnceLock<Regex> = OnceLock::new();
    let folded = normalize_text(label);
    let line = LINE.get_or_init(|| {
        Regex::new(r"(?:^|[^a-z0-9])n\s*[-_]?\s*\(?([dgfhc])\)?(?:$|[^a-z0-9])").expect("static regex")
    });
    if let Some(c) = line.captures(&folded) {
        return Some(match &c[1] {
            "d" => WavelengthTarget::ND,
            "g" => WavelengthTarget::NG,
            "f" => WavelengthTarget::NF,
            "h" => WavelengthTarget::NH,
            _ => WavelengthTarget::NC,
        });
    }
    let nm = NM.get_or_init(|| Regex::new(r"(\d{3}(?:\.\d+)?)\s*nm").expect("static regex"));
    let value: f64 = nm.captures(&folded)?[1].parse().ok()?;
    WavelengthTarget::ALL
        .into_iter()
        .find(|t| (t.wavelength_nm() - value).abs() <= 0.5)
}

/// Whether the label names some wavelength, supported or not.
fn names_wavelength(label: &str) -> bool {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\d{3}(?:\.\d+)?\s*nm|(?:^|[^a-z0-9])n\s*[-_]?\s*\(?[a-z]\)?(?:$|[^a-z0-9])|line").expect("static regex")
    })
    .is_match(&normalize_text(label))
}

/// Class of an optics column under `dict`.
pub fn classify_column(label: &str, dict: &CurationDictionary) -> ColumnClass {
    dict.classify(label, |l| declared_wavelength(l).map(Target::Wavelength))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NKind {
    Explicit(WavelengthTarget),
    Generic,
    /// Declares a wavelength with no standardized column (e-line, 587.6 nm...).
    Unsupported,
}

/// How each property column of the filtered dataset is used.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OpticsColumns {
    pub explicit: Vec<(String, String)>,
    pub generic: Vec<String>,
    pub unsupported: Vec<String>,
    pub abbe: Vec<String>,
    pub blacklisted: Vec<String>,
    pub implausible: Vec<String>,
    #[serde(skip)]
    n_cols: Vec<(usize, NKind)>,
    #[serde(skip)]
    abbe_cols: Vec<usize>,
    #[serde(skip)]
    black_cols: Vec<usize>,
}

impl OpticsColumns {
    fn plan(schema: &Schema, plausible: &[bool], dict: &CurationDictionary) -> Self {
        let mut out = OpticsColumns::default();
        for (k, label) in schema.properties.iter().enumerate() {
            let idx = schema.oxides.len() + k;
            let class = classify_column(label, dict);
            match class {
                ColumnClass::FalsePositive => {
                    out.blacklisted.push(label.clone());
                    out.black_cols.push(idx);
                }
                ColumnClass::ExplicitUnit(Target::Abbe) => {
                    out.abbe.push(label.clone());
                    out.abbe_cols.push(idx);
                }
                _ if dict.mapped(label).is_none() && is_abbe_label(label) => {
                    out.abbe.push(label.clone());
                    out.abbe_cols.push(idx);
                }
                ColumnClass::ExplicitUnit(Target::Tliq(_)) => {}
                _ if !plausible[k] => out.implausible.push(label.clone()),
                ColumnClass::ExplicitUnit(Target::Wavelength(w)) => {
                    out.explicit.push((label.clone(), w.column().to_string()));
                    out.n_cols.push((idx, NKind::Explicit(w)));
                }
                ColumnClass::Generic if names_wavelength(label) => {
                    out.unsupported.push(label.clone());
                    out.n_cols.push((idx, NKind::Unsupported));
                }
                ColumnClass::Generic => {
                    out.generic.push(label.clone());
                    out.n_cols.push((idx, NKind::Generic));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OpticsDrop {
    NoN,
    Blacklisted,
    AmbiguousN,
    UnmappedGeneric,
    UnsupportedWavelength,
}

impl OpticsDrop {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NoN => "no_n",
            Self::Blacklisted => "blacklisted",
            Self::AmbiguousN => "ambiguous_n",
            Self::UnmappedGeneric => "unmapped_generic",
            Self::UnsupportedWavelength => "unsupported_wavelength",
        }
    }
}

/// One standardized output row.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticsRow {
    pub oxides: Vec<f64>,
    pub n: [f64; 5],
    pub abbe: f64,
    pub patent_id: String,
    pub unit: String,
}

impl OpticsRow {
    pub fn get(&self, target: WavelengthTarget) -> f64 {
        self.n[WavelengthTarget::ALL.iter().position(|t| *t == target).unwrap()]
    }

    fn cells(&self) -> Vec<String> {
        self.oxides
            .iter()
            .chain(&self.n)
            .chain([&self.abbe])
            .map(|v| format_number(*v))
            .chain([self.patent_id.clone(), self.unit.clone()])
            .collect()
    }
}

pub fn output_header(oxides: &[String]) -> Vec<String> {
    oxides
        .iter()
        .cloned()
        .chain(WavelengthTarget::ALL.iter().map(|t| t.column().to_string()))
        .chain([ABBE_COLUMN.to_string(), PATENT_ID.to_string(), UNIT.to_string()])
        .collect()
}

/// Single-n rule, standardization and generic resolution for one row.
/// `queue` receives `(patent_id, label)` pairs needing curation.
fn standardize_row(
    record: &Record,
    schema: &Schema,
    cols: &OpticsColumns,
    dict: &CurationDictionary,
    queue: &mut Vec<(String, String)>,
) -> std::result::Result<OpticsRow, OpticsDrop> {
    let pid = record.tag(schema, PATENT_ID).unwrap_or_default();
    let candidates: Vec<f64> = cols.n_cols.iter().map(|(i, _)| record.values[*i]).collect();
    let n = match merged_refractive_marker(&candidates) {
        None => {
            let black = cols.black_cols.iter().any(|i| record.values[*i] != 0.0);
            return Err(if black { OpticsDrop::Blacklisted } else { OpticsDrop::NoN });
        }
        Some(v) if v == AMBIGUOUS => return Err(OpticsDrop::AmbiguousN),
        Some(v) => v,
    };
    let (idx, kind) = cols.n_cols[candidates.iter().position(|v| *v != 0.0).unwrap()];
    let label = &schema.properties[idx - schema.oxides.len()];
    let target = match kind {
        NKind::Explicit(w) => w,
        NKind::Generic => match dict.wavelength_of(pid) {
            Some(w) => w,
            None => {
                queue.push((pid.to_string(), label.clone()));
                return Err(OpticsDrop::UnmappedGeneric);
            }
        },
        NKind::Unsupported => {
            queue.push((pid.to_string(), label.clone()));
            return Err(OpticsDrop::UnsupportedWavelength);
        }
    };

    let mut abbe_values: Vec<f64> = cols
        .abbe_cols
        .iter()
        .map(|i| record.values[*i])
        .filter(|v| *v != 0.0)
        .collect();
    abbe_values.sort_by(f64::total_cmp);
    abbe_values.dedup();
    let abbe = match abbe_values.as_slice() {
        [] => 0.0,
        [v] => *v,
        _ => {
            for i in &cols.abbe_cols {
                if record.values[*i] != 0.0 {
                    queue.push((pid.to_string(), schema.properties[*i - schema.oxides.len()].clone()));
                }
            }
            0.0
        }
    };

    let mut out_n = [0.0; 5];
    out_n[WavelengthTarget::ALL.iter().position(|t| *t == target).unwrap()] = n;
    Ok(OpticsRow {
        oxides: record.oxides(schema).to_vec(),
        n: out_n,
        abbe,
        patent_id: pid.to_string(),
        unit: record.tag(schema, UNIT).unwrap_or("none").to_string(),
    })
}

/// Standardizes an in-memory set of records. Returns kept rows, drop reason
/// per dropped input row index, and the curation queue.
pub fn standardize(
    schema: &Schema,
    records: &[Record],
    dict: &CurationDictionary,
) -> (Vec<OpticsRow>, Vec<(usize, OpticsDrop)>, Vec<(String, String)>) {
    let plausible = column_plausibility(schema, records.iter());
    let cols = OpticsColumns::plan(schema, &plausible, dict);
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut queue = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match standardize_row(r, schema, &cols, dict, &mut queue) {
            Ok(row) => kept.push(row),
            Err(d) => dropped.push((i, d)),
        }
    }
    (kept, dropped, dedup_queue(queue))
}

fn column_plausibility<'a>(schema: &Schema, records: impl Iterator<Item = &'a Record>) -> Vec<bool> {
    let mut ok = vec![true; schema.properties.len()];
    for r in records {
        for (k, v) in r.properties(schema).iter().enumerate() {
            if *v != 0.0 && !is_plausible_n(*v) {
                ok[k] = false;
            }
        }
    }
    ok
}

fn dedup_queue(queue: Vec<(String, String)>) -> Vec<(String, String)> {
    let mut seen = BTreeSet::new();
    queue
        .into_iter()
        .filter(|e| seen.insert(e.clone()))
        .collect()
}

pub fn write_queue(path: &Path, queue: &[(String, String)]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| Error::io(path, e))?);
    for (pid, label) in queue {
        writeln!(f, "{pid}\t{label}").map_err(|e| Error::io(path, e))?;
    }
    f.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OpticsSummary {
    pub rows_in: usize,
    pub rows_out: usize,
    pub drops: HashMap<String, usize>,
    pub parts: usize,
    pub parts_reused: usize,
    pub curation_queue: usize,
    pub columns: OpticsColumns,
    #[serde(skip)]
    pub output: PathBuf,
}

/// Streams `input` (a filtered dataset) into `out_dir/optics.csv`.
pub fn run(
    input: &Path,
    dict: &CurationDictionary,
    lexicon: &CompoundLexicon,
    chunk_size: usize,
    out_dir: &Path,
) -> Result<OpticsSummary> {
    let schema = DatasetReader::open(input, lexicon)?.schema().clone();
    let mut plausible = vec![true; schema.properties.len()];
    for r in DatasetReader::open(input, lexicon)? {
        let r = r?;
        for (k, v) in r.properties(&schema).iter().enumerate() {
            if *v != 0.0 && !is_plausible_n(*v) {
                plausible[k] = false;
            }
        }
    }
    let cols = OpticsColumns::plan(&schema, &plausible, dict);
    let plan = PartPlan {
        dir: out_dir.join("parts"),
        chunk_size,
        header: output_header(&schema.oxides),
        fingerprint: input_fingerprint(input, &format!("optics|{}", dict.to_json()))?,
    };

    let mut summary = OpticsSummary::default();
    let mut drops: HashMap<OpticsDrop, usize> = HashMap::new();
    let mut queue = Vec::new();
    let reader = DatasetReader::open(input, lexicon)?;
    let outcome = run_parts(&plan, reader, |record| {
        summary.rows_in += 1;
        Ok(match standardize_row(&record, &schema, &cols, dict, &mut queue) {
            Ok(row) => vec![row.cells()],
            Err(d) => {
                *drops.entry(d).or_default() += 1;
                vec![]
            }
        })
    })?;

    let output = out_dir.join(OPTICS_FILE);
    let mut protected: Vec<&str> = WavelengthTarget::ALL.iter().map(|t| t.column()).collect();
    protected.extend([ABBE_COLUMN, PATENT_ID, UNIT]);
    let merged = merge_parts(&outcome.parts, &output, &protected)?;
    let props: Vec<String> = protected[..6].iter().map(|s| s.to_string()).collect();
    ContributionsReport::scan(&output, &props)?.save(&out_dir.join(CONTRIBUTIONS_FILE))?;
    let queue = dedup_queue(queue);
    write_queue(&out_dir.join(CURATION_QUEUE), &queue)?;

    summary.rows_out = merged.rows_written;
    for d in [
        OpticsDrop::NoN,
        OpticsDrop::Blacklisted,
        OpticsDrop::AmbiguousN,
        OpticsDrop::UnmappedGeneric,
        OpticsDrop::UnsupportedWavelength,
    ] {
        summary.drops.insert(d.as_str().into(), drops.get(&d).copied().unwrap_or(0));
    }
    summary.parts = outcome.parts.len();
    summary.parts_reused = outcome.reused.len();
    summary.curation_queue = queue.len();
    summary.columns = cols;
    summary.output = output;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dict(json: &str) -> CurationDictionary {
        CurationDictionary::from_json(json).unwrap()
    }

    fn schema(props: &[&str]) -> Schema {
        Schema::new(
            vec!["SiO2".into(), "B2O3".into()],
            props.iter().map(|s| s.to_string()).collect(),
            vec![PATENT_ID.into(), UNIT.into()],
        )
    }

    fn rec(values: &[f64], pid: &str) -> Record {
        Record {
            values: values.to_vec(),
            tags: vec![pid.into(), "mol".into()],
        }
    }

    #[test]
    fn plausibility_bounds() {
        assert!(plausible_column([1.8046, 1.8082]));
        assert!(!plausible_column([2.5, 6.1]));
        assert!(!plausible_column([1.0]));
        assert!(plausible_column([5.0, 0.0]));
        let labels: Vec<String> = ["nd", "density", "νd"].iter().map(|s| s.to_string()).collect();
        let cols = vec![vec![1.8, 1.9], vec![2.5, 6.1], vec![40.6, 90.3]];
        assert_eq!(plausible_n_columns(&labels, &cols), vec!["nd", "νd"]);
    }

    #[test]
    fn blacklist_removes_only_listed() {
        let d = dict(r#"{"blacklist": ["density"]}"#);
        assert_eq!(apply_blacklist(&["nd", "density", "n"], &d), vec!["nd", "n"]);
    }

    #[test]
    fn marker_rule() {
        assert_eq!(merged_refractive_marker(&[0.0, 1.950]), Some(1.950));
        assert_eq!(merged_refractive_marker(&[1.95, 1.96]), Some(AMBIGUOUS));
        assert_eq!(merged_refractive_marker(&[]), None);
        assert_eq!(merged_refractive_marker(&[0.0, 0.0]), None);
    }

    #[test]
    fn declared_wavelengths() {
        assert_eq!(declared_wavelength("nd"), Some(WavelengthTarget::ND));
        assert_eq!(declared_wavelength("n_f"), Some(WavelengthTarget::NF));
        assert_eq!(declared_wavelength("refractive index nc"), Some(WavelengthTarget::NC));
        assert_eq!(declared_wavelength("n (589.3 nm)"), Some(WavelengthTarget::ND));
        assert_eq!(declared_wavelength("n at 435.8 nm"), Some(WavelengthTarget::NG));
        assert_eq!(declared_wavelength("n (587.6 nm)"), None);
        assert_eq!(declared_wavelength("n"), None);
        assert_eq!(declared_wavelength("refractive index"), None);
        assert_eq!(declared_wavelength("na2o"), None);
        assert!(names_wavelength("ne"));
        assert!(names_wavelength("n (587.6 nm)"));
        assert!(!names_wavelength("n"));
        assert!(!names_wavelength("refractive index"));
    }

    #[test]
    fn table4_row_standardizes() {
        let s = schema(&["nd", "νd"]);
        let r = rec(&[12.32, 29.72, 1.8046, 40.6], "US9_b0");
        let (kept, dropped, queue) = standardize(&s, &[r], &CurationDictionary::default());
        assert!(dropped.is_empty() && queue.is_empty());
        assert_eq!(kept[0].get(WavelengthTarget::ND), 1.8046);
        assert_eq!(kept[0].abbe, 40.6);
    }

    #[test]
    fn two_candidates_leave_the_simple_subset() {
        let s = schema(&["n1", "n2"]);
        let rows = [rec(&[50.0, 50.0, 1.95, 1.96], "US1_b0"), rec(&[50.0, 50.0, 1.95, 0.0], "US1_b0")];
        let d = dict(r#"{"patent_wavelength_map": {"US1": "nD"}}"#);
        let (kept, dropped, _) = standardize(&s, &rows, &d);
        assert_eq!(kept.len(), 1);
        assert_eq!(dropped, vec![(0, OpticsDrop::AmbiguousN)]);
    }

    #[test]
    fn label_map_moves_value_to_target() {
        let s = schema(&["refractive index (587.6 nm ≈ d-line)"]);
        let d = dict(r#"{"label_map": {"refractive index (587.6 nm ≈ d-line)": "nD"}}"#);
        let (kept, _, _) = standardize(&s, &[rec(&[50.0, 50.0, 1.71], "US1_b0")], &d);
        assert_eq!(kept[0].n, [1.71, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn generic_resolution() {
        let s = schema(&["n"]);
        let d = dict(r#"{"patent_wavelength_map": {"US11485676B2": "nF"}}"#);
        let rows = [rec(&[50.0, 50.0, 1.95], "us11485676b2_b12"), rec(&[50.0, 50.0, 1.95], "us7_b0")];
        let (kept, dropped, queue) = standardize(&s, &rows, &d);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].get(WavelengthTarget::NF), 1.95);
        assert_eq!(dropped, vec![(1, OpticsDrop::UnmappedGeneric)]);
        assert_eq!(queue, vec![("us7_b0".to_string(), "n".to_string())]);
    }

    #[test]
    fn blacklisted_only_row_is_excluded() {
        let s = schema(&["nd", "density"]);
        let d = dict(r#"{"blacklist": ["density"]}"#);
        let rows = [
            rec(&[50.0, 50.0, 1.5, 2.5], "US1_b0"),
            rec(&[50.0, 50.0, 0.0, 2.6], "US1_b0"),
            rec(&[50.0, 50.0, 1.6, 0.0], "US1_b0"),
        ];
        let (kept, dropped, _) = standardize(&s, &rows, &d);
        assert_eq!(kept.len(), 2);
        assert_eq!(dropped, vec![(1, OpticsDrop::Blacklisted)]);
    }

    #[test]
    fn abbe_only_row_is_excluded() {
        let s = schema(&["νd"]);
        let (kept, dropped, _) = standardize(&s, &[rec(&[50.0, 50.0, 40.6], "US1_b0")], &CurationDictionary::default());
        assert!(kept.is_empty());
        assert_eq!(dropped, vec![(0, OpticsDrop::NoN)]);
    }

    #[test]
    fn implausible_columns_are_not_candidates() {
        let s = schema(&["n", "density"]);
        let d = dict(r#"{"patent_wavelength_map": {"US1": "nD"}}"#);
        let rows = [rec(&[50.0, 50.0, 1.5, 2.5], "US1_b0"), rec(&[50.0, 50.0, 1.6, 6.1], "US1_b0")];
        let (kept, dropped, _) = standardize(&s, &rows, &d);
        assert_eq!(kept.len(), 2);
        assert!(dropped.is_empty());
    }

    proptest! {
        #[test]
        fn values_are_relocated_never_changed(
            rows in prop::collection::vec(
                (prop::option::of(1.01f64..4.99), prop::option::of(1.01f64..4.99), prop::option::of(10f64..100.0)),
                1..40,
            )
        ) {
            let s = schema(&["nd", "n", "νd"]);
            let d = dict(r#"{"patent_wavelength_map": {"US1": "nC"}}"#);
            let records: Vec<Record> = rows
                .iter()
                .map(|(a, b, c)| rec(&[50.0, 50.0, a.unwrap_or(0.0), b.unwrap_or(0.0), c.unwrap_or(0.0)], "US1_b0"))
                .collect();
            let (kept, dropped, _) = standardize(&s, &records, &d);
            prop_assert_eq!(kept.len() + dropped.len(), records.len());
            let mut expected: Vec<f64> = Vec::new();
            for (i, r) in records.iter().enumerate() {
                if !dropped.iter().any(|(j, _)| *j == i) {
                    expected.extend(r.values[2..4].iter().filter(|v| **v != 0.0));
                }
            }
            let mut got: Vec<f64> = kept.iter().flat_map(|k| k.n).filter(|v| *v != 0.0).collect();
            expected.sort_by(f64::total_cmp);
            got.sort_by(f64::total_cmp);
            prop_assert_eq!(expected, got);
            for k in &kept {
                prop_assert_eq!(k.n.iter().filter(|v| **v != 0.0).count(), 1);
                prop_assert!(k.n.iter().all(|v| *v != AMBIGUOUS));
            }
        }
    }

    #[test]
    fn streaming_run_writes_outputs() {
        let d = tempfile::tempdir().unwrap();
        let input = d.path().join("filtered.csv");
        std::fs::write(
            &input,
            "SiO2,B2O3,nd,n,νd,density,patent_id,unit\n\
             50,50,1.8046,0,40.6,0,US1_b0,mol\n\
             50,50,1.7,1.8,0,0,US1_b0,mol\n\
             50,50,0,1.6,0,0,US2_b0,mass\n\
             50,50,0,0,0,2.5,US1_b0,mol\n",
        )
        .unwrap();
        let dict = dict(r#"{"blacklist": ["density"]}"#);
        let out = d.path().join("optics");
        std::fs::create_dir_all(&out).unwrap();
        let s = run(&input, &dict, &CompoundLexicon::builtin(), 2, &out).unwrap();
        assert_eq!(s.rows_in, 4);
        assert_eq!(s.rows_out, 1);
        assert_eq!(s.drops["ambiguous_n"], 1);
        assert_eq!(s.drops["unmapped_generic"], 1);
        assert_eq!(s.drops["blacklisted"], 1);
        let text = std::fs::read_to_string(out.join(OPTICS_FILE)).unwrap();
        assert_eq!(
            text,
            "SiO2,B2O3,nD,nG,nF,nH,nC,Abbe Number,patent_id,unit\n50,50,1.8046,0,0,0,0,40.6,US1_b0,mol\n"
        );
        assert_eq!(std::fs::read_to_string(out.join(CURATION_QUEUE)).unwrap(), "US2_b0\tn\n");
    }
}
