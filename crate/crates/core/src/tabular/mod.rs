//! From raw table-section markup to labeled tables: text folding, compound
//! detection, block segmentation, header heuristics and unit labeling.

mod lexicon;
pub mod markup;
mod normalize;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

pub use lexicon::CompoundLexicon;
pub use normalize::normalize_text;

use crate::error::{Error, Result};
use crate::ingest::{PatentId, PatentRecord};

/// Composition basis evidence for a whole patent document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitLabel {
    Mol,
    Mass,
    Both,
    None,
}

impl UnitLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitLabel::Mol => "mol",
            UnitLabel::Mass => "mass",
            UnitLabel::Both => "both",
            UnitLabel::None => "none",
        }
    }

    /// Lenient parse; anything unrecognized is `None`.
    pub fn parse(s: &str) -> Self {
        match s.trim().to_ascii_lowercase().as_str() {
            "mol" | "molar" | "mol%" => UnitLabel::Mol,
            "mass" | "wt" | "wt%" | "weight" => UnitLabel::Mass,
            "both" => UnitLabel::Both,
            _ => UnitLabel::None,
        }
    }
}

impl fmt::Display for UnitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn mol_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\bmol(?:e|es|ar)?\b").unwrap())
}

fn mass_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\bwt\b|\b(?:weight|mass)\s*(?:%|percent|pct)|%\s*by\s*(?:weight|mass)")
            .unwrap()
    })
}

/// Aggregates mol and mass indicators over all of a patent's table sections.
pub fn detect_unit_label<S: AsRef<str>>(fragments: &[S]) -> UnitLabel {
    let mut mol = false;
    let mut mass = false;
    for fragment in fragments {
        let text = normalize_text(&markup::visible_text(fragment.as_ref()));
        mol |= mol_regex().is_match(&text);
        mass |= mass_regex().is_match(&text);
    }
    match (mol, mass) {
        (true, true) => UnitLabel::Both,
        (true, false) => UnitLabel::Mol,
        (false, true) => UnitLabel::Mass,
        (false, false) => UnitLabel::None,
    }
}

/// Verbatim markup of every outermost `<table>` of a section, in order.
pub fn split_blocks(fragment: &str) -> Result<Vec<String>> {
    Ok(markup::outer_elements(fragment, "table")?
        .into_iter()
        .map(|span| fragment[span].to_string())
        .collect())
}

/// Whether any table section of the record mentions a lexicon compound.
pub fn filter_relevant(record: &PatentRecord, lexicon: &CompoundLexicon) -> bool {
    record
        .html_tables
        .iter()
        .any(|f| !lexicon.find_compounds(&markup::visible_text(f)).is_empty())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeuristicConfig {
    pub property_keywords: Vec<String>,
    pub min_compounds: usize,
    pub max_columns: usize,
    pub max_label_len: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            property_keywords: ["refractive", "abbe", "liquidus", "cte", "nd", "tliq", "νd"]
                .into_iter()
                .map(String::from)
                .collect(),
            min_compounds: 2,
            max_columns: 64,
            max_label_len: 120,
        }
    }
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_compounds == 0 || self.max_columns == 0 || self.max_label_len == 0 {
            return Err(Error::Config(
                "heuristic limits must be positive".to_string(),
            ));
        }
        Ok(())
    }

    fn keyword_regex(&self) -> Option<Regex> {
        let alternatives: Vec<String> = self
            .property_keywords
            .iter()
            .map(|k| normalize_text(k))
            .filter(|k| !k.is_empty())
            .map(|k| regex::escape(&k))
            .collect();
        if alternatives.is_empty() {
            return None;
        }
        let pattern = format!(
            r"(?:^|[^\p{{L}}\p{{N}}])(?:{})(?:$|[^\p{{L}}\p{{N}}])",
            alternatives.join("|")
        );
        Some(Regex::new(&pattern).expect("escaped keywords form a valid regex"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeaderReject {
    TooFewCompounds,
    NoPropertyKeyword,
    WidthExceeded,
}

impl HeaderReject {
    pub fn as_str(self) -> &'static str {
        match self {
            HeaderReject::TooFewCompounds => "too_few_compounds",
            HeaderReject::NoPropertyKeyword => "no_property_keyword",
            HeaderReject::WidthExceeded => "width_exceeded",
        }
    }
}

/// Finds the composition header: the first row naming at least
/// `min_compounds` distinct lexicon compounds. The header region (that row and
/// everything above it) must mention a property keyword, and the header must
/// fit the configured width limits.
pub fn detect_header(
    grid: &[Vec<String>],
    lexicon: &CompoundLexicon,
    config: &HeuristicConfig,
) -> std::result::Result<usize, HeaderReject> {
    let header = grid
        .iter()
        .position(|row| {
            let mut found: Vec<&str> = row.iter().filter_map(|c| lexicon.match_label(c)).collect();
            found.sort_unstable();
            found.dedup();
            found.len() >= config.min_compounds
        })
        .ok_or(HeaderReject::TooFewCompounds)?;

    let keywords = config.keyword_regex();
    let has_keyword = grid[..=header].iter().flatten().any(|cell| {
        keywords
            .as_ref()
            .is_some_and(|re| re.is_match(&normalize_text(cell)))
    });
    if !has_keyword {
        return Err(HeaderReject::NoPropertyKeyword);
    }

    let row = &grid[header];
    if row.len() > config.max_columns
        || row
            .iter()
            .any(|c| normalize_text(c).chars().count() > config.max_label_len)
    {
        return Err(HeaderReject::WidthExceeded);
    }
    Ok(header)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Missing,
    Text(String),
    Number(f64),
}

impl Cell {
    pub fn from_text(s: &str) -> Self {
        if s.trim().is_empty() {
            Cell::Missing
        } else {
            Cell::Text(s.to_string())
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Missing => Ok(()),
            Cell::Text(s) => f.write_str(s),
            Cell::Number(v) => write!(f, "{v}"),
        }
    }
}

/// Labeled columns over rows of cells, tagged with the block it came from.
/// Every row holds exactly `labels.len()` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnarTable {
    labels: Vec<String>,
    rows: Vec<Vec<Cell>>,
    source_id: PatentId,
}

impl ColumnarTable {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<Cell>>, source_id: PatentId) -> Self {
        let width = labels.len();
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.resize(width, Cell::Missing);
                r
            })
            .collect();
        Self {
            labels,
            rows,
            source_id,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn source_id(&self) -> &PatentId {
        &self.source_id
    }

    pub fn column(&self, index: usize) -> impl Iterator<Item = &Cell> {
        self.rows.iter().map(move |r| &r[index])
    }

    /// Keeps the columns for which `keep(index, label)` holds.
    pub fn retain_columns(&mut self, mut keep: impl FnMut(usize, &str) -> bool) {
        let mask: Vec<bool> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| keep(i, l))
            .collect();
        let mut i = 0;
        self.labels.retain(|_| {
            i += 1;
            mask[i - 1]
        });
        for row in &mut self.rows {
            let mut i = 0;
            row.retain(|_| {
                i += 1;
                mask[i - 1]
            });
        }
    }

    /// CSV with the table's labels plus a trailing `patent_id` column holding
    /// the block tag.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = crate::csvio::writer(out);
        let mut header: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        header.push(crate::PATENT_ID);
        w.write_record(&header).map_err(|e| Error::csv("<block>", e))?;
        let tag = self.source_id.tag();
        for row in &self.rows {
            let mut cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            cells.push(tag.clone());
            w.write_record(&cells).map_err(|e| Error::csv("<block>", e))?;
        }
        w.flush().map_err(|e| Error::io("<block>", e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Builds the table below an accepted header. Labels and cells are folded with
/// [`normalize_text`]; short rows are padded with missing cells and long rows
/// truncated to the header width.
pub fn block_to_table(grid: &[Vec<String>], header_index: usize, id: PatentId) -> ColumnarTable {
    let labels: Vec<String> = grid[header_index].iter().map(|c| normalize_text(c)).collect();
    let width = labels.len();
    let rows = grid[header_index + 1..]
        .iter()
        .map(|r| {
            r.iter()
                .take(width)
                .map(|c| Cell::from_text(&normalize_text(c)))
                .collect()
        })
        .collect();
    ColumnarTable::new(labels, rows, id)
}

/// What extraction made of one patent.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub publication_number: String,
    pub relevant: bool,
    pub unit: UnitLabel,
    pub tables: Vec<ColumnarTable>,
    pub rejected: Vec<(PatentId, HeaderReject)>,
    /// Fragment index and reason for every section that could not be split.
    pub unparseable: Vec<(usize, String)>,
}

impl Extraction {
    pub fn blocks_seen(&self) -> usize {
        self.tables.len() + self.rejected.len()
    }
}

/// Runs relevance filtering, block splitting and header detection over one
/// record. Block indices run sequentially over all sections of the patent.
pub fn extract_record(
    record: &PatentRecord,
    lexicon: &CompoundLexicon,
    config: &HeuristicConfig,
) -> Extraction {
    let mut out = Extraction {
        publication_number: record.publication_number.to_ascii_uppercase(),
        relevant: filter_relevant(record, lexicon),
        unit: detect_unit_label(&record.html_tables),
        tables: Vec::new(),
        rejected: Vec::new(),
        unparseable: Vec::new(),
    };
    if !out.relevant {
        return out;
    }
    let mut k = 0;
    for (fi, fragment) in record.html_tables.iter().enumerate() {
        let blocks = match split_blocks(fragment) {
            Ok(b) => b,
            Err(e) => {
                log::warn!("{}: section {fi} skipped: {e}", record.publication_number);
                out.unparseable.push((fi, e.to_string()));
                continue;
            }
        };
        for block in blocks {
            let id = PatentId::new(&record.publication_number, k);
            k += 1;
            let grid = markup::parse_grid(&block);
            match detect_header(&grid, lexicon, config) {
                Ok(h) => out.tables.push(block_to_table(&grid, h, id)),
                Err(reason) => out.rejected.push((id, reason)),
            }
        }
    }
    out
}
