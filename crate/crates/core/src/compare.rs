//! Comparison against reference databases and summary statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::csvio;
use crate::dataset::{format_number, Dataset, Record, Schema};
use crate::dictionary::{WavelengthTarget, ABBE_COLUMN};
use crate::error::{Error, Result};
use crate::liquidus::TLIQ_COLUMN;

pub const SUBSET_REPORT: &str = "subset_report.csv";
pub const OXIDE_FREQ: &str = "oxide_freq.csv";
pub const ABBE_DIAGRAM: &str = "abbe_diagram.csv";
pub const PATENTS_PER_YEAR: &str = "patents_per_year.csv";
pub const VIOLIN: &str = "violin.csv";
pub const DEFAULT_PRECISION: u32 = 2;
pub const TOP_OXIDES: usize = 20;

/// Canonical text of a composition: `formula:value` pairs sorted by formula,
/// values rounded to a fixed number of decimals, zero amounts left out.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositionKey(String);

impl CompositionKey {
    pub fn new<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>, precision: u32) -> Self {
        let scale = 10f64.powi(precision as i32);
        let mut parts: Vec<(&str, i64)> = pairs
            .into_iter()
            .filter(|(_, v)| v.is_finite())
            .map(|(f, v)| (f, (v * scale).round() as i64))
            .filter(|(_, q)| *q != 0)
            .collect();
        parts.sort_unstable();
        let body: Vec<String> = parts
            .into_iter()
            .map(|(f, q)| format!("{f}:{}", fixed(q, precision)))
            .collect();
        Self(body.join(";"))
    }

    pub fn of_record(schema: &Schema, record: &Record, precision: u32) -> Self {
        Self::new(
            schema
                .oxides
                .iter()
                .map(String::as_str)
                .zip(record.oxides(schema).iter().copied()),
            precision,
        )
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CompositionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn fixed(q: i64, precision: u32) -> String {
    if precision == 0 {
        return q.to_string();
    }
    let scale = 10i64.pow(precision);
    let sign = if q < 0 { "-" } else { "" };
    let a = q.unsigned_abs();
    format!(
        "{sign}{}.{:0width$}",
        a / scale as u64,
        a % scale as u64,
        width = precision as usize
    )
}

pub type KeySet = BTreeSet<CompositionKey>;

/// Indices of `a` whose key is not in `b`.
pub fn subtract(a: &[CompositionKey], b: &KeySet) -> Vec<usize> {
    a.iter()
        .enumerate()
        .filter(|(_, k)| !b.contains(*k))
        .map(|(i, _)| i)
        .collect()
}

/// Rows of `a` whose composition does not occur in `b`.
pub fn subtract_dataset(a: &Dataset, b: &Dataset, precision: u32) -> Dataset {
    let keys_b: KeySet = b
        .records
        .iter()
        .map(|r| CompositionKey::of_record(&b.schema, r, precision))
        .collect();
    Dataset {
        schema: a.schema.clone(),
        records: a
            .records
            .iter()
            .filter(|r| !keys_b.contains(&CompositionKey::of_record(&a.schema, r, precision)))
            .cloned()
            .collect(),
    }
}

/// Properties reported per column of the subset table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Property {
    Liquidus,
    Refractive,
    Abbe,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::Liquidus, Property::Refractive, Property::Abbe];

    pub fn title(self) -> &'static str {
        match self {
            Property::Liquidus => "Liquidus Temperature",
            Property::Refractive => "Refractive Index",
            Property::Abbe => "Abbe Number",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Property::Liquidus => "tliq",
            Property::Refractive => "nd",
            Property::Abbe => "abbe",
        }
    }

    /// Columns whose non-zero value marks the property as present.
    pub fn columns(self) -> Vec<&'static str> {
        match self {
            Property::Liquidus => vec![TLIQ_COLUMN],
            Property::Refractive => WavelengthTarget::ALL.iter().map(|w| w.column()).collect(),
            Property::Abbe => vec![ABBE_COLUMN],
        }
    }

    /// Column used as the value of this property in plots.
    pub fn value_column(self) -> &'static str {
        match self {
            Property::Liquidus => TLIQ_COLUMN,
            Property::Refractive => WavelengthTarget::ND.column(),
            Property::Abbe => ABBE_COLUMN,
        }
    }

    pub fn present(self, schema: &Schema, record: &Record) -> bool {
        self.columns()
            .into_iter()
            .filter_map(|c| record.property(schema, c))
            .any(|v| v != 0.0 && v.is_finite())
    }
}

/// Distinct composition keys of one source, per property and overall.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyKeys {
    pub total: KeySet,
    pub by_property: BTreeMap<Property, KeySet>,
}

impl PropertyKeys {
    pub fn from_datasets(datasets: &[&Dataset], precision: u32) -> Self {
        let mut keys = Self::default();
        for d in datasets {
            keys.add(d, precision);
        }
        keys
    }

    /// Rows carrying none of the properties are not counted.
    pub fn add(&mut self, dataset: &Dataset, precision: u32) {
        for r in &dataset.records {
            let present: Vec<Property> = Property::ALL
                .into_iter()
                .filter(|p| p.present(&dataset.schema, r))
                .collect();
            if present.is_empty() {
                continue;
            }
            let key = CompositionKey::of_record(&dataset.schema, r, precision);
            for p in present {
                self.by_property.entry(p).or_default().insert(key.clone());
            }
            self.total.insert(key);
        }
    }

    pub fn get(&self, p: Option<Property>) -> &KeySet {
        static EMPTY: KeySet = BTreeSet::new();
        match p {
            None => &self.total,
            Some(p) => self.by_property.get(&p).unwrap_or(&EMPTY),
        }
    }

    fn map(&self, f: impl Fn(Option<Property>) -> KeySet) -> Self {
        Self {
            total: f(None),
            by_property: Property::ALL.into_iter().map(|p| (p, f(Some(p)))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetRow {
    pub source: String,
    /// Total first, then one entry per [`Property::ALL`].
    pub counts: Vec<usize>,
    pub percent: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetReport {
    pub rows: Vec<SubsetRow>,
}

impl SubsetReport {
    pub fn header() -> Vec<&'static str> {
        std::iter::once("Source")
            .chain(std::iter::once("Total"))
            .chain(Property::ALL.iter().map(|p| p.title()))
            .collect()
    }

    pub fn row(&self, source: &str) -> Option<&SubsetRow> {
        self.rows.iter().find(|r| r.source == source)
    }

    /// One line per source; cells read `count (pct%)`.
    pub fn render_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                std::iter::once(r.source.clone())
                    .chain(r.counts.iter().zip(&r.percent).map(|(c, p)| match p {
                        Some(p) => format!("{c} ({p:.1}%)"),
                        None => format!("{c} (n/a)"),
                    }))
                    .collect()
            })
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        csvio::replace_atomically(path, |w| {
            w.write_record(Self::header()).map_err(|e| Error::csv(path, e))?;
            for row in self.render_rows() {
                w.write_record(&row).map_err(|e| Error::csv(path, e))?;
            }
            Ok(())
        })
    }
}

pub fn patents_minus_label(reference: &str) -> String {
    format!("Patents-{reference}")
}

/// Subset counts of the patent data against two references. Percentages are
/// relative to the deduplicated union of the references, per column.
pub fn subset_report(
    patents: &PropertyKeys,
    a: &PropertyKeys,
    b: &PropertyKeys,
    names: (&str, &str),
) -> SubsetReport {
    let union = a.map(|p| a.get(p).union(b.get(p)).cloned().collect());
    let minus = |other: &PropertyKeys| patents.map(|p| patents.get(p).difference(other.get(p)).cloned().collect());
    let sources: Vec<(String, PropertyKeys)> = vec![
        (format!("{}+{}", names.0, names.1), union.clone()),
        (names.0.to_string(), a.clone()),
        (names.1.to_string(), b.clone()),
        ("Patents".to_string(), patents.clone()),
        (patents_minus_label(names.0), minus(a)),
        (patents_minus_label(names.1), minus(b)),
        (patents_minus_label("Unique"), minus(&union)),
    ];
    let columns: Vec<Option<Property>> = std::iter::once(None).chain(Property::ALL.map(Some)).collect();
    let rows = sources
        .into_iter()
        .map(|(source, keys)| {
            let counts: Vec<usize> = columns.iter().map(|p| keys.get(*p).len()).collect();
            let percent = columns
                .iter()
                .zip(&counts)
                .map(|(p, c)| {
                    let base = union.get(*p).len();
                    (base > 0).then(|| *c as f64 / base as f64 * 100.0)
                })
                .collect();
            SubsetRow { source, counts, percent }
        })
        .collect();
    SubsetReport { rows }
}

/// Share of each oxide among all oxide occurrences (amount > 0), sorted by
/// descending share then formula.
pub fn oxide_relative_frequency(dataset: &Dataset) -> Vec<(String, f64)> {
    let mut counts = vec![0usize; dataset.schema.oxides.len()];
    for r in &dataset.records {
        for (c, v) in counts.iter_mut().zip(r.oxides(&dataset.schema)) {
            if *v > 0.0 {
                *c += 1;
            }
        }
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Vec::new();
    }
    let mut out: Vec<(String, f64)> = dataset
        .schema
        .oxides
        .iter()
        .zip(&counts)
        .filter(|(_, c)| **c > 0)
        .map(|(o, c)| (o.clone(), *c as f64 / total as f64))
        .collect();
    out.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    out
}

/// `bins` equal-width edges spanning `[lo, hi]`.
pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let w = (hi - lo) / bins as f64;
    (0..=bins)
        .map(|i| if i == bins { hi } else { lo + w * i as f64 })
        .collect()
}

/// Density per bin: count / (N * width), where N counts the values inside
/// the edges. Bins are half-open except the last, which is closed.
pub fn histogram_density(values: &[f64], edges: &[f64]) -> Result<Vec<f64>> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("bin edges must be strictly increasing".into()));
    }
    let last = edges.len() - 2;
    let mut counts = vec![0usize; edges.len() - 1];
    for v in values.iter().copied().filter(|v| v.is_finite()) {
        if v < edges[0] || v > edges[last + 1] {
            continue;
        }
        let i = edges.partition_point(|e| *e <= v).saturating_sub(1).min(last);
        counts[i] += 1;
    }
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(Error::Invalid("no finite values inside the bin edges".into()));
    }
    Ok(counts
        .iter()
        .zip(edges.windows(2))
        .map(|(c, w)| *c as f64 / (n as f64 * (w[1] - w[0])))
        .collect())
}

pub fn patents_per_year(years: impl IntoIterator<Item = i32>) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for y in years {
        *out.entry(y).or_insert(0) += 1;
    }
    out
}

/// A dataset with the name it carries in plot exports.
pub struct Source<'a> {
    pub name: &'a str,
    pub data: &'a Dataset,
}

fn property_values(src: &Source<'_>, p: Property) -> Vec<f64> {
    let col = p.value_column();
    src.data
        .records
        .iter()
        .filter_map(|r| r.property(&src.data.schema, col))
        .filter(|v| *v != 0.0 && v.is_finite())
        .collect()
}

/// `source,nD,Abbe Number` for every row carrying both.
pub fn abbe_diagram(sources: &[Source<'_>]) -> Vec<[String; 3]> {
    let nd = WavelengthTarget::ND.column();
    let mut out = Vec::new();
    for s in sources {
        for r in &s.data.records {
            let (Some(n), Some(v)) = (r.property(&s.data.schema, nd), r.property(&s.data.schema, ABBE_COLUMN)) else {
                continue;
            };
            if n != 0.0 && v != 0.0 {
                out.push([s.name.to_string(), format_number(n), format_number(v)]);
            }
        }
    }
    out
}

/// Long-format histogram over shared edges for one property.
pub fn histogram_rows(sources: &[Source<'_>], p: Property, bins: usize) -> Result<Vec<[String; 4]>> {
    let values: Vec<Vec<f64>> = sources.iter().map(|s| property_values(s, p)).collect();
    let all = values.iter().flatten().copied();
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return Ok(Vec::new());
    }
    let edges = uniform_edges(lo, hi, bins);
    let mut out = Vec::new();
    for (s, v) in sources.iter().zip(&values) {
        if v.is_empty() {
            continue;
        }
        let d = histogram_density(v, &edges)?;
        for (i, density) in d.iter().enumerate() {
            out.push([
                s.name.to_string(),
                format_number(edges[i]),
                format_number(edges[i + 1]),
                format_number(*density),
            ]);
        }
    }
    Ok(out)
}

/// Relative frequencies of the first source's top oxides, in that order,
/// for every source.
pub fn oxide_freq_rows(sources: &[Source<'_>], top: usize) -> Vec<[String; 3]> {
    let freqs: Vec<Vec<(String, f64)>> = sources.iter().map(|s| oxide_relative_frequency(s.data)).collect();
    let Some(first) = freqs.first() else {
        return Vec::new();
    };
    let order: Vec<&str> = first.iter().take(top).map(|(o, _)| o.as_str()).collect();
    let mut out = Vec::new();
    for (s, f) in sources.iter().zip(&freqs) {
        let lookup: HashMap<&str, f64> = f.iter().map(|(o, v)| (o.as_str(), *v)).collect();
        for o in &order {
            out.push([
                s.name.to_string(),
                o.to_string(),
                format_number(lookup.get(o).copied().unwrap_or(0.0)),
            ]);
        }
    }
    out
}

/// `source,property,oxide,amount` for each selected oxide present in a row
/// that carries the property.
pub fn violin_rows(sources: &[Source<'_>], oxides: &[String]) -> Vec<[String; 4]> {
    let mut out = Vec::new();
    for s in sources {
        let schema = &s.data.schema;
        let idx: Vec<(&String, usize)> = oxides
            .iter()
            .filter_map(|o| schema.oxide_index(o).map(|i| (o, i)))
            .collect();
        for p in Property::ALL {
            for r in &s.data.records {
                if !p.present(schema, r) {
                    continue;
                }
                for (o, i) in &idx {
                    let v = r.values[*i];
                    if v > 0.0 {
                        out.push([s.name.to_string(), p.title().to_string(), o.to_string(), format_number(v)]);
                    }
                }
            }
        }
    }
    out
}

pub fn write_rows<const N: usize>(path: &Path, header: [&str; N], rows: &[[String; N]]) -> Result<()> {
    csvio::replace_atomically(path, |w| {
        w.write_record(header).map_err(|e| Error::csv(path, e))?;
        for r in rows {
            w.write_record(r).map_err(|e| Error::csv(path, e))?;
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportSettings {
    pub precision: u32,
    pub bins: usize,
    pub violin_oxides: Vec<String>,
}

impl Default for ExportSettings {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION,
            bins: 40,
            violin_oxides: ["SiO2", "B2O3", "Bi2O3", "TiO2", "Nb2O5"].map(String::from).to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub report: SubsetReport,
    pub files: Vec<String>,
}

/// Writes every report for the patent data (first source) and two
/// references into `out_dir`.
pub fn export_all(
    patents: &Dataset,
    refs: [(&str, &Dataset); 2],
    years: &BTreeMap<i32, usize>,
    settings: &ExportSettings,
    out_dir: &Path,
) -> Result<CompareSummary> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let p = settings.precision;
    let report = subset_report(
        &PropertyKeys::from_datasets(&[patents], p),
        &PropertyKeys::from_datasets(&[refs[0].1], p),
        &PropertyKeys::from_datasets(&[refs[1].1], p),
        (refs[0].0, refs[1].0),
    );
    report.save(&out_dir.join(SUBSET_REPORT))?;
    let mut files = vec![SUBSET_REPORT.to_string()];

    let sources = [
        Source { name: "Patents", data: patents },
        Source { name: refs[0].0, data: refs[0].1 },
        Source { name: refs[1].0, data: refs[1].1 },
    ];
    write_rows(&out_dir.join(ABBE_DIAGRAM), ["source", "nD", ABBE_COLUMN], &abbe_diagram(&sources))?;
    files.push(ABBE_DIAGRAM.into());
    for prop in Property::ALL {
        let name = format!("hist_{}.csv", prop.slug());
        let rows = histogram_rows(&sources, prop, settings.bins)?;
        write_rows(&out_dir.join(&name), ["source", "bin_left", "bin_right", "density"], &rows)?;
        files.push(name);
    }
    write_rows(
        &out_dir.join(OXIDE_FREQ),
        ["source", "oxide", "relative_frequency"],
        &oxide_freq_rows(&sources, TOP_OXIDES),
    )?;
    files.push(OXIDE_FREQ.into());
    write_rows(
        &out_dir.join(VIOLIN),
        ["source", "property", "oxide", "amount"],
        &violin_rows(&sources, &settings.violin_oxides),
    )?;
    files.push(VIOLIN.into());
    let year_rows: Vec<[String; 2]> = years.iter().map(|(y, n)| [y.to_string(), n.to_string()]).collect();
    write_rows(&out_dir.join(PATENTS_PER_YEAR), ["year", "patents"], &year_rows)?;
    files.push(PATENTS_PER_YEAR.into());
    Ok(CompareSummary { report, files })
}
