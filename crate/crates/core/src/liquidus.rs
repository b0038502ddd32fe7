//! Liquidus temperature: column matching, unit and condition normalization,
//! and range plausibility.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dataset::{format_number, DatasetReader, Record, Schema};
use crate::dictionary::{Condition, CurationDictionary, Target, TempUnit, TliqTarget};
use crate::error::{Error, Result};
use crate::optics::write_queue;
use crate::parts::{input_fingerprint, merge_parts, run_parts, ContributionsReport, PartPlan};
use crate::tabular::{normalize_text, CompoundLexicon};
use crate::{PATENT_ID, UNIT};

pub const LIQUIDUS_FILE: &str = "liquidus.csv";
pub const TLIQ_COLUMN: &str = "Tliq(°C)";
pub const CONDITION_COLUMN: &str = "condition";
pub const CURATION_QUEUE: &str = "curation_queue.txt";
pub const CONTRIBUTIONS_FILE: &str = "contributions_by_patent.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LiquidusConfig {
    /// Inclusive plausibility range in °C.
    pub min_c: f64,
    pub max_c: f64,
}

impl Default for LiquidusConfig {
    fn default() -> Self {
        Self {
            min_c: 450.0,
            max_c: 1900.0,
        }
    }
}

impl LiquidusConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_c.is_finite() && self.max_c.is_finite() && self.min_c < self.max_c) {
            return Err(Error::Config("liquidus range must satisfy min_c < max_c".into()));
        }
        Ok(())
    }

    pub fn in_range(&self, c: f64) -> bool {
        c >= self.min_c && c <= self.max_c
    }
}

/// Rounds to 1e-10 so that decimal inputs such as 1273.15 K land exactly on
/// the decimal result instead of one ulp off.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e5 {
        (x * 1e10).round() / 1e10
    } else {
        x
    }
}

pub fn f_to_c(t: f64) -> f64 {
    snap((t - 32.0) * 5.0 / 9.0)
}

pub fn k_to_c(t: f64) -> f64 {
    snap(t - 273.15)
}

pub fn c_to_f(t: f64) -> f64 {
    snap(t * 9.0 / 5.0 + 32.0)
}

pub fn c_to_k(t: f64) -> f64 {
    snap(t + 273.15)
}

pub fn to_celsius(t: f64, unit: TempUnit) -> f64 {
    match unit {
        TempUnit::Celsius => t,
        TempUnit::Fahrenheit => f_to_c(t),
        TempUnit::Kelvin => k_to_c(t),
    }
}

fn tliq_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"liquidus|t\s*liq|\btl\b|\bliq\b").expect("static regex"))
}

/// Whether a label looks like a liquidus column. `tl` counts only as a
/// standalone token.
pub fn is_tliq_label(label: &str) -> bool {
    tliq_regex().is_match(&normalize_text(label))
}

pub fn match_tliq_columns<'a>(labels: &'a [String]) -> Vec<&'a str> {
    labels
        .iter()
        .filter(|l| is_tliq_label(l))
        .map(String::as_str)
        .collect()
}

/// Unit read off a label, if it declares one.
pub fn declared_unit(label: &str) -> Option<TempUnit> {
    static F: OnceLock<Regex> = OnceLock::new();
    static K: OnceLock<Regex> = OnceLock::new();
    static C: OnceLock<Regex> = OnceLock::new();
    let folded = normalize_text(label);
    let f = F.get_or_init(|| {
        Regex::new(r"°\s*f\b|\bdeg(?:rees?)?\.?\s*f\b|fahrenheit|\(\s*f\s*\)|(?:^|\s)f$").expect("static regex")
    });
    let k = K.get_or_init(|| {
        Regex::new(r"°\s*k\b|kelvin|\(\s*k\s*\)|(?:^|\s)k$|\bin\s+k\b").expect("static regex")
    });
    let c = C.get_or_init(|| {
        Regex::new(r"°\s*c\b|\bdeg(?:rees?)?\.?\s*c\b|celsius|\(\s*c\s*\)|(?:^|[\s.])c$|\bin\s+c\b").expect("static regex")
    });
    if f.is_match(&folded) {
        Some(TempUnit::Fahrenheit)
    } else if k.is_match(&folded) {
        Some(TempUnit::Kelvin)
    } else if c.is_match(&folded) {
        Some(TempUnit::Celsius)
    } else {
        None
    }
}

pub fn declared_condition(label: &str) -> Option<Condition> {
    static AIR: OnceLock<Regex> = OnceLock::new();
    static PT: OnceLock<Regex> = OnceLock::new();
    static INTERNAL: OnceLock<Regex> = OnceLock::new();
    let folded = normalize_text(label);
    if PT.get_or_init(|| Regex::new(r"platinum|\bpt\b").expect("static regex")).is_match(&folded) {
        Some(Condition::Platinum)
    } else if AIR.get_or_init(|| Regex::new(r"\bair\b").expect("static regex")).is_match(&folded) {
        Some(Condition::Air)
    } else if INTERNAL.get_or_init(|| Regex::new(r"internal").expect("static regex")).is_match(&folded) {
        Some(Condition::Internal)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TliqKind {
    Explicit(TliqTarget),
    /// No unit in the label; condition, if any, still read off it.
    Generic(Option<Condition>),
}

fn column_kind(label: &str, dict: &CurationDictionary) -> Option<TliqKind> {
    if dict.is_blacklisted(label) {
        return None;
    }
    match dict.mapped(label) {
        Some(Target::Tliq(t)) => return Some(TliqKind::Explicit(t)),
        Some(_) => return None,
        None => {}
    }
    if !is_tliq_label(label) {
        return None;
    }
    let condition = declared_condition(label);
    Some(match declared_unit(label) {
        Some(unit) => TliqKind::Explicit(TliqTarget::new(unit, condition)),
        None => TliqKind::Generic(condition),
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LiquidusColumns {
    pub explicit: Vec<(String, String)>,
    pub generic: Vec<String>,
    #[serde(skip)]
    cols: Vec<(usize, TliqKind)>,
}

impl LiquidusColumns {
    pub fn plan(schema: &Schema, dict: &CurationDictionary) -> Self {
        let mut out = LiquidusColumns::default();
        for (k, label) in schema.properties.iter().enumerate() {
            let idx = schema.oxides.len() + k;
            match column_kind(label, dict) {
                Some(TliqKind::Explicit(t)) => out.explicit.push((label.clone(), t.to_string())),
                Some(TliqKind::Generic(_)) => out.generic.push(label.clone()),
                None => continue,
            }
            out.cols.push((idx, column_kind(label, dict).unwrap()));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiquidusDrop {
    NoTliq,
    UnmappedGeneric,
    OutOfRange,
    Ambiguous,
}

impl LiquidusDrop {
    pub const ALL: [LiquidusDrop; 4] = [Self::NoTliq, Self::UnmappedGeneric, Self::OutOfRange, Self::Ambiguous];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::NoTliq => "no_tliq",
            Self::UnmappedGeneric => "unmapped_generic",
            Self::OutOfRange => "out_of_range",
            Self::Ambiguous => "ambiguous",
        }
    }
}

/// Exactly one distinct in-range value, or why not.
pub fn plausibility_filter(candidates_c: &[f64], cfg: &LiquidusConfig) -> std::result::Result<f64, LiquidusDrop> {
    let mut valid: Vec<f64> = candidates_c.iter().copied().filter(|c| cfg.in_range(*c)).collect();
    valid.sort_by(f64::total_cmp);
    valid.dedup();
    match valid.as_slice() {
        [v] => Ok(*v),
        [] => Err(LiquidusDrop::OutOfRange),
        _ => Err(LiquidusDrop::Ambiguous),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiquidusRow {
    pub oxides: Vec<f64>,
    pub tliq_c: f64,
    pub condition: Option<Condition>,
    pub patent_id: String,
    pub unit: String,
}

impl LiquidusRow {
    fn cells(&self) -> Vec<String> {
        self.oxides
            .iter()
            .chain([&self.tliq_c])
            .map(|v| format_number(*v))
            .chain([
                self.condition.map_or("", Condition::as_str).to_string(),
                self.patent_id.clone(),
                self.unit.clone(),
            ])
            .collect()
    }
}

pub fn output_header(oxides: &[String]) -> Vec<String> {
    oxides
        .iter()
        .cloned()
        .chain([TLIQ_COLUMN, CONDITION_COLUMN, PATENT_ID, UNIT].map(String::from))
        .collect()
}

/// Per-row bookkeeping beyond the output rows.
#[derive(Debug, Default)]
struct RowNotes {
    queue: Vec<(String, String)>,
    generic_overridden: usize,
}

/// Standardizes one row: one output row per measurement condition whose
/// candidates hold exactly one plausible value.
fn consolidate_row(
    record: &Record,
    schema: &Schema,
    cols: &LiquidusColumns,
    dict: &CurationDictionary,
    cfg: &LiquidusConfig,
    notes: &mut RowNotes,
) -> std::result::Result<Vec<LiquidusRow>, LiquidusDrop> {
    let pid = record.tag(schema, PATENT_ID).unwrap_or_default();
    let mut explicit: Vec<(Option<Condition>, f64)> = Vec::new();
    let mut generic: Vec<(Option<Condition>, f64)> = Vec::new();
    let mut unresolved: Vec<&str> = Vec::new();
    for (idx, kind) in &cols.cols {
        let v = record.values[*idx];
        if v == 0.0 {
            continue;
        }
        match kind {
            TliqKind::Explicit(t) => explicit.push((t.condition, to_celsius(v, t.unit))),
            TliqKind::Generic(cond) => match dict.tliq_unit_of(pid) {
                Some(t) => generic.push((cond.or(t.condition), to_celsius(v, t.unit))),
                None => unresolved.push(&schema.properties[idx - schema.oxides.len()]),
            },
        }
    }
    let had_unresolved = !unresolved.is_empty();
    let candidates = if explicit.is_empty() {
        for label in unresolved {
            notes.queue.push((pid.to_string(), label.to_string()));
        }
        generic
    } else {
        if !generic.is_empty() || !unresolved.is_empty() {
            log::debug!("{pid}: generic liquidus columns ignored in favour of explicit ones");
            notes.generic_overridden += 1;
        }
        explicit
    };
    if candidates.is_empty() {
        return Err(if had_unresolved {
            LiquidusDrop::UnmappedGeneric
        } else {
            LiquidusDrop::NoTliq
        });
    }

    let mut groups: BTreeMap<Option<Condition>, Vec<f64>> = BTreeMap::new();
    for (cond, c) in candidates {
        groups.entry(cond).or_default().push(c);
    }
    let mut rows = Vec::new();
    let mut worst = LiquidusDrop::OutOfRange;
    for (cond, values) in groups {
        match plausibility_filter(&values, cfg) {
            Ok(t) => rows.push(LiquidusRow {
                oxides: record.oxides(schema).to_vec(),
                tliq_c: t,
                condition: cond,
                patent_id: pid.to_string(),
                unit: record.tag(schema, UNIT).unwrap_or("none").to_string(),
            }),
            Err(d) => worst = worst.max(d),
        }
    }
    if rows.is_empty() {
        Err(worst)
    } else {
        Ok(rows)
    }
}

/// In-memory form of the stage, for tests and small inputs.
pub fn consolidate_tliq(
    schema: &Schema,
    records: &[Record],
    dict: &CurationDictionary,
    cfg: &LiquidusConfig,
) -> (Vec<LiquidusRow>, Vec<(usize, LiquidusDrop)>, Vec<(String, String)>) {
    let cols = LiquidusColumns::plan(schema, dict);
    let mut notes = RowNotes::default();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match consolidate_row(r, schema, &cols, dict, cfg, &mut notes) {
            Ok(rows) => kept.extend(rows),
            Err(d) => dropped.push((i, d)),
        }
    }
    (kept, dropped, dedup(notes.queue))
}

fn dedup(queue: Vec<(String, String)>) -> Vec<(String, String)> {
    let mut seen = BTreeSet::new();
    queue.into_iter().filter(|e| seen.insert(e.clone())).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LiquidusSummary {
    pub rows_in: usize,
    pub rows_out: usize,
    pub drops: HashMap<String, usize>,
    /// Output rows beyond the first for inputs measured under several
    /// conditions.
    pub split_rows: usize,
    pub generic_overridden: usize,
    pub parts: usize,
    pub parts_reused: usize,
    pub curation_queue: usize,
    pub columns: LiquidusColumns,
    #[serde(skip)]
    pub output: PathBuf,
}

pub fn run(
    input: &Path,
    dict: &CurationDictionary,
    cfg: &LiquidusConfig,
    lexicon: &CompoundLexicon,
    chunk_size: usize,
    out_dir: &Path,
) -> Result<LiquidusSummary> {
    cfg.validate()?;
    let reader = DatasetReader::open(input, lexicon)?;
    let schema = reader.schema().clone();
    let cols = LiquidusColumns::plan(&schema, dict);
    let plan = PartPlan {
        dir: out_dir.join("parts"),
        chunk_size,
        header: output_header(&schema.oxides),
        fingerprint: input_fingerprint(input, &format!("liquidus|{cfg:?}|{}", dict.to_json()))?,
    };
    let mut summary = LiquidusSummary::default();
    let mut drops: HashMap<LiquidusDrop, usize> = HashMap::new();
    let mut notes = RowNotes::default();
    let outcome = run_parts(&plan, reader, |record| {
        summary.rows_in += 1;
        Ok(match consolidate_row(&record, &schema, &cols, dict, cfg, &mut notes) {
            Ok(rows) => {
                summary.split_rows += rows.len() - 1;
                rows.iter().map(LiquidusRow::cells).collect()
            }
            Err(d) => {
                *drops.entry(d).or_default() += 1;
                vec![]
            }
        })
    })?;

    let output = out_dir.join(LIQUIDUS_FILE);
    let merged = merge_parts(&outcome.parts, &output, &[TLIQ_COLUMN, CONDITION_COLUMN, PATENT_ID, UNIT])?;
    ContributionsReport::scan(&output, &[TLIQ_COLUMN.to_string()])?.save(&out_dir.join(CONTRIBUTIONS_FILE))?;
    let queue = dedup(notes.queue);
    write_queue(&out_dir.join(CURATION_QUEUE), &queue)?;

    summary.rows_out = merged.rows_written;
    for d in LiquidusDrop::ALL {
        summary.drops.insert(d.as_str().into(), drops.get(&d).copied().unwrap_or(0));
    }
    summary.generic_overridden = notes.generic_overridden;
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

    fn schema(props: &[&str]) -> Schema {
        Schema::new(
            vec!["SiO2".into(), "Na2O".into()],
            props.iter().map(|s| s.to_string()).collect(),
            vec![PATENT_ID.into(), UNIT.into()],
        )
    }

    fn rec(props: &[f64], pid: &str) -> Record {
        let mut values = vec![70.0, 30.0];
        values.extend_from_slice(props);
        Record {
            values,
            tags: vec![pid.into(), "mol".into()],
        }
    }

    #[test]
    fn label_matching_against_hand_list() {
        let cases = [
            ("liquidus temperature (°c)", true),
            ("tliq c", true),
            ("total", false),
            ("tl (°c)", true),
            ("liq. c", true),
            ("tliquidus °c", true),
            ("t liq (k)", true),
            ("tg (°c)", false),
            ("title", false),
            ("bottle", false),
            ("softening point", false),
            ("liquid phase", false),
        ];
        for (label, expected) in cases {
            assert_eq!(is_tliq_label(label), expected, "{label}");
        }
        let labels: Vec<String> = cases.iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(match_tliq_columns(&labels).len(), 6);
    }

    #[test]
    fn conversions_are_exact_at_examples() {
        assert_eq!(f_to_c(1832.0), 1000.0);
        assert_eq!(k_to_c(1273.15), 1000.0);
        assert_eq!(f_to_c(32.0), 0.0);
        assert_eq!(c_to_k(0.0), 273.15);
        assert_eq!(c_to_f(100.0), 212.0);
    }

    proptest! {
        #[test]
        fn conversions_round_trip(t in -1.0e4f64..1.0e4) {
            prop_assert!((c_to_f(f_to_c(t)) - t).abs() <= 1e-9);
            prop_assert!((c_to_k(k_to_c(t)) - t).abs() <= 1e-9);
            prop_assert!((f_to_c(c_to_f(t)) - t).abs() <= 1e-9);
        }
    }

    #[test]
    fn units_and_conditions_from_labels() {
        assert_eq!(declared_unit("liquidus temperature (°c)"), Some(TempUnit::Celsius));
        assert_eq!(declared_unit("tliquidus °c"), Some(TempUnit::Celsius));
        assert_eq!(declared_unit("liq. c"), Some(TempUnit::Celsius));
        assert_eq!(declared_unit("tliq c"), Some(TempUnit::Celsius));
        assert_eq!(declared_unit("liquidus temp (k)"), Some(TempUnit::Kelvin));
        assert_eq!(declared_unit("tl (°f)"), Some(TempUnit::Fahrenheit));
        assert_eq!(declared_unit("liquidus ℃"), Some(TempUnit::Celsius));
        assert_eq!(declared_unit("liquidus temperature"), None);
        assert_eq!(declared_unit("tliq"), None);
        assert_eq!(declared_condition("liquidus (platinum) °c"), Some(Condition::Platinum));
        assert_eq!(declared_condition("tl air (°c)"), Some(Condition::Air));
        assert_eq!(declared_condition("tl pt"), Some(Condition::Platinum));
        assert_eq!(declared_condition("internal liquidus"), Some(Condition::Internal));
        assert_eq!(declared_condition("liquidus"), None);
    }

    #[test]
    fn kelvin_column_converts() {
        let s = schema(&["liquidus temp (k)"]);
        let (rows, _, _) = consolidate_tliq(&s, &[rec(&[1273.15], "US1_b0")], &CurationDictionary::default(), &LiquidusConfig::default());
        assert_eq!(rows[0].tliq_c, 1000.0);
    }

    #[test]
    fn table2_row_keeps_673() {
        let s = schema(&["n", "tliq (°c)", "νd"]);
        let (rows, dropped, _) = consolidate_tliq(
            &s,
            &[rec(&[1.950, 673.0, 18.6], "us11485676b2_b12")],
            &CurationDictionary::default(),
            &LiquidusConfig::default(),
        );
        assert!(dropped.is_empty());
        assert_eq!(rows[0].tliq_c, 673.0);
        assert_eq!(rows[0].condition, None);
    }

    #[test]
    fn platinum_label_gets_condition_tag() {
        let s = schema(&["liquidus (platinum) °c"]);
        let (rows, _, _) = consolidate_tliq(&s, &[rec(&[1100.0], "US1_b0")], &CurationDictionary::default(), &LiquidusConfig::default());
        assert_eq!(rows[0].condition, Some(Condition::Platinum));
        assert_eq!(rows[0].cells()[3], "Platinum");
    }

    #[test]
    fn air_and_platinum_become_separate_rows() {
        let s = schema(&["tl air (°c)", "tl platinum (°c)"]);
        let (rows, _, _) = consolidate_tliq(&s, &[rec(&[1000.0, 1010.0], "US1_b0")], &CurationDictionary::default(), &LiquidusConfig::default());
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].condition, Some(Condition::Air));
        assert_eq!(rows[1].condition, Some(Condition::Platinum));
    }

    #[test]
    fn plausibility_rule() {
        let cfg = LiquidusConfig::default();
        assert_eq!(plausibility_filter(&[673.0], &cfg), Ok(673.0));
        assert_eq!(plausibility_filter(&[690.0, 31623.0], &cfg), Ok(690.0));
        assert_eq!(plausibility_filter(&[500.0, 1500.0], &cfg), Err(LiquidusDrop::Ambiguous));
        assert_eq!(plausibility_filter(&[450.0], &cfg), Ok(450.0));
        assert_eq!(plausibility_filter(&[1900.0], &cfg), Ok(1900.0));
        assert_eq!(plausibility_filter(&[449.99, 1900.01], &cfg), Err(LiquidusDrop::OutOfRange));
    }

    #[test]
    fn viscosity_confounder_row() {
        let s = schema(&["tl (°c)", "tl.1"]);
        let d = CurationDictionary::from_json(r#"{"label_map": {"tl.1": "Tliq(°C)"}}"#).unwrap();
        let (rows, _, _) = consolidate_tliq(&s, &[rec(&[690.0, 31623.0], "US1_b0")], &d, &LiquidusConfig::default());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].tliq_c, 690.0);
    }

    #[test]
    fn generic_columns_use_patent_map_and_lose_to_explicit() {
        let s = schema(&["liquidus", "tliq (°c)"]);
        let d = CurationDictionary::from_json(r#"{"patent_unit_map": {"US1": "Tliq(°F)"}}"#).unwrap();
        let cfg = LiquidusConfig::default();
        let (rows, dropped, queue) = consolidate_tliq(
            &s,
            &[
                rec(&[1832.0, 0.0], "US1_b0"),
                rec(&[1832.0, 0.0], "US2_b0"),
                rec(&[1832.0, 900.0], "US1_b0"),
            ],
            &d,
            &cfg,
        );
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].tliq_c, 1000.0);
        assert_eq!(rows[1].tliq_c, 900.0);
        assert_eq!(dropped, vec![(1, LiquidusDrop::UnmappedGeneric)]);
        assert_eq!(queue, vec![("US2_b0".to_string(), "liquidus".to_string())]);
    }

    proptest! {
        #[test]
        fn outputs_always_in_range(values in prop::collection::vec((0f64..40000.0, 0f64..3000.0), 1..50)) {
            let s = schema(&["tl (°c)", "liquidus (k)"]);
            let records: Vec<Record> = values.iter().map(|(a, b)| rec(&[*a, *b], "US1_b0")).collect();
            let cfg = LiquidusConfig::default();
            let (rows, dropped, _) = consolidate_tliq(&s, &records, &CurationDictionary::default(), &cfg);
            prop_assert!(rows.len() + dropped.len() >= records.len());
            for r in rows {
                prop_assert!(cfg.in_range(r.tliq_c));
            }
        }
    }

    #[test]
    fn streaming_run() {
        let d = tempfile::tempdir().unwrap();
        let input = d.path().join("filtered.csv");
        std::fs::write(
            &input,
            "SiO2,Na2O,nd,tliq (°c),tl air (°c),tl platinum (°c),patent_id,unit\n\
             70,30,1.5,0,1000,1010,US1_b0,mol\n\
             70,30,1.5,673,0,0,US1_b1,mol\n\
             70,30,1.5,0,0,0,US1_b1,mol\n\
             70,30,0,2500,0,0,US2_b0,mass\n",
        )
        .unwrap();
        let out = d.path().join("liq");
        std::fs::create_dir_all(&out).unwrap();
        let s = run(&input, &CurationDictionary::default(), &LiquidusConfig::default(), &CompoundLexicon::builtin(), 3, &out).unwrap();
        assert_eq!(s.rows_in, 4);
        assert_eq!(s.rows_out, 3);
        assert_eq!(s.split_rows, 1);
        assert_eq!(s.drops["no_tliq"], 1);
        assert_eq!(s.drops["out_of_range"], 1);
        assert_eq!(s.rows_in + s.split_rows, s.rows_out + s.drops.values().sum::<usize>());
        assert_eq!(
            std::fs::read_to_string(out.join(LIQUIDUS_FILE)).unwrap(),
            "SiO2,Na2O,Tliq(°C),condition,patent_id,unit\n\
             70,30,1000,Air,US1_b0,mol\n\
             70,30,1010,Platinum,US1_b0,mol\n\
             70,30,673,,US1_b1,mol\n"
        );
    }
}
