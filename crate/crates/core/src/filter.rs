//! Reduction of the consolidated table to rows with a closed composition and
//! at least one reported property.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use regex::RegexSet;
use serde::{Deserialize, Serialize};

use crate::consolidate::read_header;
use crate::csvio;
use crate::dataset::format_number;
use crate::error::{Error, Result};
use crate::ingest::PatentId;
use crate::parts::{input_fingerprint, merge_parts, run_parts, ContributionsReport, PartPlan};
use crate::tabular::{normalize_text, ColumnarTable, CompoundLexicon, UnitLabel};
use crate::{PATENT_ID, UNIT};

/// Float slack on the closure bound so that decimal boundary sums such as
/// 100.5 are not rejected by binary rounding.
const CLOSURE_EPS: f64 = 1e-9;

pub const DEFAULT_PROPERTY_PATTERNS: &[&str] = &[
    r"refract",
    r"(?:^|\s)n[dcfgeh]?(?:$|[^a-z0-9])",
    r"\babbe\b",
    r"ν",
    r"\bv\s*d\b",
    r"liquidus",
    r"t\s*liq",
    r"\btl\b",
    r"\bliq\b",
    r"\bcte\b",
    r"expansion",
    r"density",
    r"\btg\b",
    r"transition",
    r"viscosity",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub closure_target: f64,
    pub closure_tolerance: f64,
    pub chunk_size: usize,
    /// Regexes over normalized labels selecting property columns.
    pub property_patterns: Vec<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            closure_target: 100.0,
            closure_tolerance: 0.5,
            chunk_size: 10_000,
            property_patterns: DEFAULT_PROPERTY_PATTERNS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.closure_tolerance > 0.0) || !self.closure_tolerance.is_finite() {
            return Err(Error::Config("closure_tolerance must be > 0".into()));
        }
        if !self.closure_target.is_finite() {
            return Err(Error::Config("closure_target must be finite".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk_size must be at least 1".into()));
        }
        self.pattern_set().map(|_| ())
    }

    fn pattern_set(&self) -> Result<RegexSet> {
        RegexSet::new(&self.property_patterns)
            .map_err(|e| Error::Config(format!("bad property pattern: {e}")))
    }
}

/// Total numeric coercion: dashes and anything unparseable become 0.
pub fn coerce_numeric(cell: Option<&str>) -> f64 {
    let Some(s) = cell else { return 0.0 };
    let t = s.trim();
    if matches!(t, "-" | "–" | "—") {
        return 0.0;
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => v,
        _ => 0.0,
    }
}

/// A label naming a sum of compounds, such as `SiO2+B2O3+Al2O3`.
pub fn is_sum_label(label: &str, lexicon: &CompoundLexicon) -> bool {
    let folded = normalize_text(label);
    folded.contains('+') && lexicon.count_distinct(&folded) >= 2
}

pub fn drop_sum_columns(mut table: ColumnarTable, lexicon: &CompoundLexicon) -> ColumnarTable {
    table.retain_columns(|_, l| !is_sum_label(l, lexicon));
    table
}

pub fn closure_filter(composition: &[f64], cfg: &FilterConfig) -> bool {
    let sum: f64 = composition.iter().sum();
    (sum - cfg.closure_target).abs() <= cfg.closure_tolerance + CLOSURE_EPS
}

pub fn property_presence(properties: &[f64]) -> bool {
    properties.iter().any(|&v| v != 0.0)
}

pub fn intersect_views(composition_pass: &BTreeSet<usize>, property_pass: &BTreeSet<usize>) -> BTreeSet<usize> {
    composition_pass.intersection(property_pass).copied().collect()
}

/// `n.1` → `n`: strips the suffix added to repeated labels.
fn base_label(label: &str) -> &str {
    match label.rsplit_once('.') {
        Some((base, k)) if !base.is_empty() && !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => base,
        _ => label,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Id,
    Oxide(usize),
    Property(usize),
    Skip,
}

/// What happens to each consolidated column.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ColumnPlan {
    pub oxides: Vec<String>,
    pub properties: Vec<String>,
    pub sum_columns: Vec<String>,
    pub ignored: Vec<String>,
    #[serde(skip)]
    roles: Vec<Role>,
}

impl ColumnPlan {
    pub fn new(labels: &[String], lexicon: &CompoundLexicon, cfg: &FilterConfig) -> Result<Self> {
        let patterns = cfg.pattern_set()?;
        let mut plan = ColumnPlan::default();
        for label in labels {
            let role = if label == PATENT_ID {
                Role::Id
            } else if is_sum_label(label, lexicon) {
                plan.sum_columns.push(label.clone());
                Role::Skip
            } else if let Some(ox) = lexicon.match_label(base_label(label)) {
                let i = match plan.oxides.iter().position(|o| o == ox) {
                    Some(i) => i,
                    None => {
                        plan.oxides.push(ox.to_string());
                        plan.oxides.len() - 1
                    }
                };
                Role::Oxide(i)
            } else if label != UNIT && patterns.is_match(&normalize_text(label)) {
                plan.properties.push(label.clone());
                Role::Property(plan.properties.len() - 1)
            } else {
                plan.ignored.push(label.clone());
                Role::Skip
            };
            plan.roles.push(role);
        }
        if !plan.roles.contains(&Role::Id) {
            return Err(Error::Invalid(format!("input has no {PATENT_ID} column")));
        }
        Ok(plan)
    }

    pub fn output_header(&self) -> Vec<String> {
        self.oxides
            .iter()
            .chain(&self.properties)
            .cloned()
            .chain([PATENT_ID.to_string(), UNIT.to_string()])
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Closure,
    NoProperty,
}

/// Outcome for one input row.
#[derive(Debug, Clone, PartialEq)]
pub enum RowVerdict {
    Keep { oxides: Vec<f64>, properties: Vec<f64>, patent_id: String },
    Drop(DropReason),
}

pub fn judge_row(record: &csv::StringRecord, plan: &ColumnPlan, cfg: &FilterConfig) -> RowVerdict {
    let mut oxides = vec![0.0; plan.oxides.len()];
    let mut properties = vec![0.0; plan.properties.len()];
    let mut patent_id = String::new();
    for (cell, role) in record.iter().zip(&plan.roles) {
        match *role {
            Role::Id => patent_id = cell.to_string(),
            Role::Oxide(i) => {
                // Repeated columns of one oxide: the first non-zero value wins.
                if oxides[i] == 0.0 {
                    oxides[i] = coerce_numeric(Some(cell));
                }
            }
            Role::Property(i) => properties[i] = coerce_numeric(Some(cell)),
            Role::Skip => {}
        }
    }
    if !closure_filter(&oxides, cfg) {
        RowVerdict::Drop(DropReason::Closure)
    } else if !property_presence(&properties) {
        RowVerdict::Drop(DropReason::NoProperty)
    } else {
        RowVerdict::Keep {
            oxides,
            properties,
            patent_id,
        }
    }
}

/// Publication number → composition basis, as recorded at extraction.
pub type UnitMap = HashMap<String, UnitLabel>;

pub const UNITS_FILE: &str = "units.csv";

pub fn write_unit_map(path: &Path, units: &[(String, UnitLabel)]) -> Result<()> {
    csvio::replace_atomically(path, |w| {
        w.write_record(["publication_number", UNIT])
            .map_err(|e| Error::csv(path, e))?;
        for (p, u) in units {
            w.write_record([p.as_str(), u.as_str()])
                .map_err(|e| Error::csv(path, e))?;
        }
        Ok(())
    })
}

pub fn read_unit_map(path: &Path) -> Result<UnitMap> {
    let mut reader = csvio::open(path)?;
    let mut map = UnitMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        if let (Some(p), Some(u)) = (rec.get(0), rec.get(1)) {
            map.insert(p.trim().to_ascii_uppercase(), UnitLabel::parse(u));
        }
    }
    Ok(map)
}

pub fn unit_for(units: &UnitMap, patent_id: &str) -> UnitLabel {
    units
        .get(&PatentId::publication_of(patent_id))
        .copied()
        .unwrap_or(UnitLabel::None)
}

pub const FILTERED_FILE: &str = "filtered.csv";
pub const CONTRIBUTIONS_FILE: &str = "contributions_by_patent.csv";

#[derive(Debug, Clone, Default, Serialize)]
pub struct FilterSummary {
    pub rows_in: usize,
    pub rows_out: usize,
    pub drops: HashMap<String, usize>,
    pub parts: usize,
    pub parts_reused: usize,
    pub columns: ColumnPlan,
    pub pruned_columns: Vec<String>,
    #[serde(skip)]
    pub output: PathBuf,
    #[serde(skip)]
    pub contributions: ContributionsReport,
}

fn fingerprint_extra(cfg: &FilterConfig, units: &UnitMap, lexicon: &CompoundLexicon) -> String {
    let mut unit_pairs: Vec<_> = units.iter().map(|(k, v)| format!("{k}={v}")).collect();
    unit_pairs.sort();
    format!(
        "filter|{cfg:?}|{}|{}",
        unit_pairs.join(","),
        lexicon.formulas().collect::<Vec<_>>().join(",")
    )
}

/// Filters `input` chunk by chunk into `out_dir/part_<n>.csv`, merges the
/// parts into `out_dir/filtered.csv` and writes the contributions report.
pub fn run_chunked(
    input: &Path,
    cfg: &FilterConfig,
    lexicon: &CompoundLexicon,
    units: &UnitMap,
    out_dir: &Path,
) -> Result<FilterSummary> {
    cfg.validate()?;
    let labels = read_header(input)?;
    let plan = ColumnPlan::new(&labels, lexicon, cfg)?;
    let part_plan = PartPlan {
        dir: out_dir.join("parts"),
        chunk_size: cfg.chunk_size,
        header: plan.output_header(),
        fingerprint: input_fingerprint(input, &fingerprint_extra(cfg, units, lexicon))?,
    };

    let mut summary = FilterSummary::default();
    let mut closure = 0;
    let mut no_property = 0;
    let mut reader = csvio::open(input)?;
    let records = reader
        .records()
        .map(|r| r.map_err(|e| Error::csv(input, e)));
    let outcome = run_parts(&part_plan, records, |record| {
        summary.rows_in += 1;
        Ok(match judge_row(&record, &plan, cfg) {
            RowVerdict::Keep {
                oxides,
                properties,
                patent_id,
            } => {
                let unit = unit_for(units, &patent_id);
                let row = oxides
                    .iter()
                    .chain(&properties)
                    .map(|v| format_number(*v))
                    .chain([patent_id, unit.as_str().to_string()])
                    .collect();
                vec![row]
            }
            RowVerdict::Drop(DropReason::Closure) => {
                closure += 1;
                vec![]
            }
            RowVerdict::Drop(DropReason::NoProperty) => {
                no_property += 1;
                vec![]
            }
        })
    })?;

    let output = out_dir.join(FILTERED_FILE);
    let merged = merge_parts(&outcome.parts, &output, &[PATENT_ID, UNIT])?;
    let surviving: Vec<String> = plan
        .properties
        .iter()
        .filter(|p| !merged.pruned_columns.contains(p))
        .cloned()
        .collect();
    let contributions = ContributionsReport::scan(&output, &surviving)?;
    contributions.save(&out_dir.join(CONTRIBUTIONS_FILE))?;

    summary.rows_out = merged.rows_written;
    summary.drops.insert("closure".into(), closure);
    summary.drops.insert("no_property".into(), no_property);
    summary.parts = outcome.parts.len();
    summary.parts_reused = outcome.reused.len();
    summary.columns = plan;
    summary.pruned_columns = merged.pruned_columns;
    summary.output = output;
    summary.contributions = contributions;
    Ok(summary)
}
