//! Stage orchestration over one output directory.
//!
//! Layout under `out`:
//! `records/`, `blocks/`, `units.csv`, `consolidated.csv`, `filter/`,
//! `optics/`, `liquidus/`, `basis/`, `compare/`, `reports/`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::basis::{self, MolarMassTable};
use crate::compare::{self, ExportSettings};
use crate::consolidate;
use crate::dataset::Dataset;
use crate::dictionary::CurationDictionary;
use crate::error::{Error, Result};
use crate::filter::{self, FilterConfig};
use crate::ingest::{self, FetchPolicy, Fetcher, FetcherConfig, PatentId, PatentRecord};
use crate::liquidus::{self, LiquidusConfig};
use crate::optics;
use crate::tabular::{self, CompoundLexicon, HeuristicConfig};
use crate::PATENT_ID;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Extract,
    Consolidate,
    Filter,
    Optics,
    Liquidus,
    Basis,
    Compare,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Ingest,
        Stage::Extract,
        Stage::Consolidate,
        Stage::Filter,
        Stage::Optics,
        Stage::Liquidus,
        Stage::Basis,
        Stage::Compare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Extract => "extract",
            Stage::Consolidate => "consolidate",
            Stage::Filter => "filter",
            Stage::Optics => "optics",
            Stage::Liquidus => "liquidus",
            Stage::Basis => "basis",
            Stage::Compare => "compare",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown stage {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub urls: Option<PathBuf>,
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub molar_masses: Option<PathBuf>,
    pub reference_a: Option<PathBuf>,
    pub reference_b: Option<PathBuf>,
}

impl Default for Paths {
    fn default() -> Self {
        Self {
            urls: None,
            corpus: "corpus".into(),
            out: "out".into(),
            lexicon: None,
            dictionary: None,
            molar_masses: None,
            reference_a: None,
            reference_b: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FetchSettings {
    pub policy: FetchPolicySetting,
    pub delay_ms: u64,
    pub timeout_s: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FetchPolicySetting {
    #[default]
    OfflineOnly,
    FetchIfMissing,
}

impl Default for FetchSettings {
    fn default() -> Self {
        Self {
            policy: FetchPolicySetting::OfflineOnly,
            delay_ms: 2000,
            timeout_s: 30,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSettings {
    pub reference_a_name: String,
    pub reference_b_name: String,
    pub key_precision: u32,
    pub bins: usize,
    pub violin_oxides: Vec<String>,
}

impl Default for CompareSettings {
    fn default() -> Self {
        let e = ExportSettings::default();
        Self {
            reference_a_name: "RefA".into(),
            reference_b_name: "RefB".into(),
            key_precision: e.precision,
            bins: e.bins,
            violin_oxides: e.violin_oxides,
        }
    }
}

/// Everything a run needs. Relative paths are resolved against the
/// directory of the configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    /// Overrides `filter.chunk_size` for every part-based stage when set.
    pub chunk_size: Option<usize>,
    pub fetch: FetchSettings,
    pub heuristics: HeuristicConfig,
    pub filter: FilterConfig,
    pub liquidus: LiquidusConfig,
    pub compare: CompareSettings,
}

impl PipelineConfig {
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let p = &mut self.paths;
        fix(&mut p.corpus);
        fix(&mut p.out);
        for opt in [
            &mut p.urls,
            &mut p.lexicon,
            &mut p.dictionary,
            &mut p.molar_masses,
            &mut p.reference_a,
            &mut p.reference_b,
        ] {
            if let Some(p) = opt {
                fix(p);
            }
        }
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size.unwrap_or(self.filter.chunk_size)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chunk_size == Some(0) {
            return Err(Error::Config("chunk_size must be positive".into()));
        }
        if self.fetch.workers == 0 {
            return Err(Error::Config("fetch.workers must be positive".into()));
        }
        if self.compare.bins == 0 {
            return Err(Error::Config("compare.bins must be positive".into()));
        }
        if self.compare.key_precision > 9 {
            return Err(Error::Config("compare.key_precision must be at most 9".into()));
        }
        if self.compare.reference_a_name == self.compare.reference_b_name {
            return Err(Error::Config("reference names must differ".into()));
        }
        self.heuristics.validate()?;
        self.filter.validate()?;
        self.liquidus.validate()?;
        let p = &self.paths;
        for (what, path) in [
            ("urls", &p.urls),
            ("lexicon", &p.lexicon),
            ("dictionary", &p.dictionary),
            ("molar_masses", &p.molar_masses),
            ("reference_a", &p.reference_a),
            ("reference_b", &p.reference_b),
        ] {
            if let Some(path) = path {
                if !path.is_file() {
                    return Err(Error::Config(format!("paths.{what}: {} does not exist", path.display())));
                }
            }
        }
        Ok(())
    }
}

/// One line of `run_report.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub stage: String,
    pub rows_in: usize,
    pub rows_out: usize,
    pub drops: BTreeMap<String, usize>,
    pub wall_ms: u64,
}

impl RunReport {
    pub fn dropped(&self) -> usize {
        self.drops.values().sum()
    }
}

/// Full stage report: the run-report fields plus stage-specific detail.
#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    #[serde(flatten)]
    pub run: RunReport,
    pub details: serde_json::Value,
}

pub const REPORTS_DIR: &str = "reports";
pub const RUN_REPORT: &str = "run_report.jsonl";

/// Output locations under `out`.
#[derive(Debug, Clone)]
pub struct Layout {
    pub out: PathBuf,
}

impl Layout {
    pub fn records(&self) -> PathBuf {
        self.out.join("records")
    }
    pub fn blocks(&self) -> PathBuf {
        self.out.join("blocks")
    }
    pub fn units(&self) -> PathBuf {
        self.out.join(filter::UNITS_FILE)
    }
    pub fn consolidated(&self) -> PathBuf {
        self.out.join("consolidated.csv")
    }
    pub fn filter_dir(&self) -> PathBuf {
        self.out.join("filter")
    }
    pub fn filtered(&self) -> PathBuf {
        self.filter_dir().join(filter::FILTERED_FILE)
    }
    pub fn optics_dir(&self) -> PathBuf {
        self.out.join("optics")
    }
    pub fn optics(&self) -> PathBuf {
        self.optics_dir().join(optics::OPTICS_FILE)
    }
    pub fn liquidus_dir(&self) -> PathBuf {
        self.out.join("liquidus")
    }
    pub fn liquidus(&self) -> PathBuf {
        self.liquidus_dir().join(liquidus::LIQUIDUS_FILE)
    }
    pub fn basis_dir(&self) -> PathBuf {
        self.out.join("basis")
    }
    pub fn compare_dir(&self) -> PathBuf {
        self.out.join("compare")
    }
    pub fn reports(&self) -> PathBuf {
        self.out.join(REPORTS_DIR)
    }
    pub fn stage_report(&self, stage: Stage) -> PathBuf {
        self.reports().join(format!("{stage}.json"))
    }
    pub fn run_report(&self) -> PathBuf {
        self.reports().join(RUN_REPORT)
    }
}

pub const UNCERTAIN_UNITS: &str = "uncertain_units.txt";
pub const CONVERSION_ERRORS: &str = "conversion_errors.txt";

/// Property datasets carried into the basis stage, with their producers.
const BASIS_INPUTS: [(&str, Stage); 2] = [("optics", Stage::Optics), ("liquidus", Stage::Liquidus)];

/// Loaded configuration plus the resources it references.
pub struct Pipeline {
    pub config: PipelineConfig,
    pub layout: Layout,
    pub lexicon: CompoundLexicon,
    pub dictionary: CurationDictionary,
    pub masses: MolarMassTable,
}

fn require(path: &Path, producer: &'static str) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::MissingInput {
            path: path.to_path_buf(),
            producer,
        })
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn drops_of<K: ToString>(m: impl IntoIterator<Item = (K, usize)>) -> BTreeMap<String, usize> {
    m.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl Pipeline {
    /// Validates the configuration and loads lexicon, dictionary and molar
    /// masses. Failures here are configuration errors.
    pub fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let lexicon = match &config.paths.lexicon {
            Some(p) => CompoundLexicon::from_file(p)?,
            None => CompoundLexicon::builtin(),
        };
        let dictionary = match &config.paths.dictionary {
            Some(p) => CurationDictionary::load(p)?,
            None => CurationDictionary::default(),
        };
        let masses = match &config.paths.molar_masses {
            Some(p) => MolarMassTable::from_file(p)?,
            None => MolarMassTable::builtin(),
        };
        masses.ensure_covers(&lexicon)?;
        let layout = Layout {
            out: config.paths.out.clone(),
        };
        Ok(Self {
            config,
            layout,
            lexicon,
            dictionary,
            masses,
        })
    }

    /// Runs one stage and records its report.
    pub fn run_stage(&self, stage: Stage) -> Result<StageReport> {
        let start = Instant::now();
        let (rows_in, rows_out, drops, details) = match stage {
            Stage::Ingest => self.ingest()?,
            Stage::Extract => self.extract()?,
            Stage::Consolidate => self.consolidate()?,
            Stage::Filter => self.filter()?,
            Stage::Optics => self.optics()?,
            Stage::Liquidus => self.liquidus()?,
            Stage::Basis => self.basis()?,
            Stage::Compare => self.compare()?,
        };
        let report = StageReport {
            run: RunReport {
                stage: stage.to_string(),
                rows_in,
                rows_out,
                drops,
                wall_ms: start.elapsed().as_millis() as u64,
            },
            details,
        };
        self.write_reports(stage, &report)?;
        log::info!(
            "{stage}: {} in, {} out, {} dropped in {} ms",
            report.run.rows_in,
            report.run.rows_out,
            report.run.dropped(),
            report.run.wall_ms
        );
        Ok(report)
    }

    /// Every stage in order, starting from a fresh run report.
    pub fn run_all(&self) -> Result<Vec<StageReport>> {
        let path = self.layout.run_report();
        if path.exists() {
            fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
        Stage::ALL.into_iter().map(|s| self.run_stage(s)).collect()
    }

    fn write_reports(&self, stage: Stage, report: &StageReport) -> Result<()> {
        let dir = self.layout.reports();
        create_dir(&dir)?;
        let path = self.layout.stage_report(stage);
        let mut body = serde_json::to_string_pretty(report).expect("report serializes");
        body.push('\n');
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        let path = self.layout.run_report();
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        let line = serde_json::to_string(&report.run).expect("report serializes");
        writeln!(f, "{line}").map_err(|e| Error::io(&path, e))
    }

    fn fetcher(&self) -> Fetcher {
        let f = &self.config.fetch;
        let mut cfg = FetcherConfig::offline(&self.config.paths.corpus);
        cfg.policy = match f.policy {
            FetchPolicySetting::OfflineOnly => FetchPolicy::OfflineOnly,
            FetchPolicySetting::FetchIfMissing => FetchPolicy::FetchIfMissing,
        };
        cfg.delay = Duration::from_millis(f.delay_ms);
        cfg.timeout = Duration::from_secs(f.timeout_s);
        Fetcher::new(cfg)
    }

    fn ingest(&self) -> Result<StageTotals> {
        let urls_path = self
            .config
            .paths
            .urls
            .as_ref()
            .ok_or_else(|| Error::Config("paths.urls is required for ingest".into()))?;
        let urls = ingest::load_url_list(urls_path)?;
        let (s, _) = ingest::ingest_urls(&urls, &self.fetcher(), &self.layout.records(), self.config.fetch.workers)?;
        let drops = drops_of([
            ("absent_tables", s.absent_tables),
            ("fetch_failed", s.fetch_failed),
            ("malformed_url", s.malformed),
        ]);
        let details = json!({ "written": s.written, "skipped_existing": s.skipped_existing });
        Ok((s.urls, s.written + s.skipped_existing, drops, details))
    }

    fn extract(&self) -> Result<StageTotals> {
        let records_dir = self.layout.records();
        require(&records_dir, "ingest")?;
        let records = ingest::load_records(&records_dir)?;
        let blocks = self.layout.blocks();
        if blocks.exists() {
            fs::remove_dir_all(&blocks).map_err(|e| Error::io(&blocks, e))?;
        }
        create_dir(&blocks)?;
        let mut units = Vec::new();
        let (mut not_relevant, mut no_table, mut written) = (0, 0, 0);
        let mut rejects: BTreeMap<&'static str, usize> = BTreeMap::new();
        for rec in &records {
            let ex = tabular::extract_record(rec, &self.lexicon, &self.config.heuristics);
            if !ex.relevant {
                not_relevant += 1;
                continue;
            }
            for (_, reason) in &ex.rejected {
                *rejects.entry(reason.as_str()).or_default() += 1;
            }
            if ex.tables.is_empty() {
                no_table += 1;
                continue;
            }
            units.push((ex.publication_number.clone(), ex.unit));
            for t in &ex.tables {
                t.save(&blocks.join(format!("{}.csv", t.source_id().render())))?;
                written += 1;
            }
        }
        units.sort_by(|a, b| a.0.cmp(&b.0));
        filter::write_unit_map(&self.layout.units(), &units)?;
        let drops = drops_of([("not_relevant", not_relevant), ("no_valid_header", no_table)]);
        let details = json!({ "blocks_written": written, "blocks_rejected": rejects });
        Ok((records.len(), units.len(), drops, details))
    }

    fn consolidate(&self) -> Result<StageTotals> {
        let blocks = self.layout.blocks();
        require(&blocks, "extract")?;
        let files = consolidate::list_csv_files(&blocks)?;
        let s = consolidate::consolidate(&files, &self.layout.consolidated())?;
        let drops = drops_of([("empty_row", s.empty_rows)]);
        let unreadable: Vec<String> = s.unreadable.iter().map(|p| p.display().to_string()).collect();
        let details = json!({
            "files": s.files,
            "unreadable": unreadable,
            "pruned_columns": s.pruned_columns,
        });
        Ok((s.rows_read, s.rows_written, drops, details))
    }

    fn filter(&self) -> Result<StageTotals> {
        let input = self.layout.consolidated();
        require(&input, "consolidate")?;
        let units_path = self.layout.units();
        require(&units_path, "extract")?;
        let units = filter::read_unit_map(&units_path)?;
        let mut cfg = self.config.filter.clone();
        cfg.chunk_size = self.config.chunk_size();
        let dir = self.layout.filter_dir();
        create_dir(&dir)?;
        let s = filter::run_chunked(&input, &cfg, &self.lexicon, &units, &dir)?;
        let details = json!({
            "parts": s.parts,
            "parts_reused": s.parts_reused,
            "columns": s.columns,
            "pruned_columns": s.pruned_columns,
        });
        Ok((s.rows_in, s.rows_out, drops_of(s.drops), details))
    }

    fn optics(&self) -> Result<StageTotals> {
        let input = self.layout.filtered();
        require(&input, "filter")?;
        let dir = self.layout.optics_dir();
        create_dir(&dir)?;
        let s = optics::run(&input, &self.dictionary, &self.lexicon, self.config.chunk_size(), &dir)?;
        let details = json!({
            "parts": s.parts,
            "parts_reused": s.parts_reused,
            "curation_queue": s.curation_queue,
            "columns": s.columns,
        });
        Ok((s.rows_in, s.rows_out, drops_of(s.drops), details))
    }

    /// `rows_out` counts input rows kept; rows written can be higher when a
    /// row carried readings for several conditions.
    fn liquidus(&self) -> Result<StageTotals> {
        let input = self.layout.filtered();
        require(&input, "filter")?;
        let dir = self.layout.liquidus_dir();
        create_dir(&dir)?;
        let s = liquidus::run(
            &input,
            &self.dictionary,
            &self.config.liquidus,
            &self.lexicon,
            self.config.chunk_size(),
            &dir,
        )?;
        let details = json!({
            "rows_written": s.rows_out,
            "split_rows": s.split_rows,
            "generic_overridden": s.generic_overridden,
            "parts": s.parts,
            "parts_reused": s.parts_reused,
            "curation_queue": s.curation_queue,
            "columns": s.columns,
        });
        Ok((s.rows_in, s.rows_out - s.split_rows, drops_of(s.drops), details))
    }

    fn basis(&self) -> Result<StageTotals> {
        let inputs = [self.layout.optics(), self.layout.liquidus()];
        for ((_, producer), path) in BASIS_INPUTS.iter().zip(&inputs) {
            require(path, producer.as_str())?;
        }
        let dir = self.layout.basis_dir();
        create_dir(&dir)?;
        let open = |name: &str| -> Result<BufWriter<fs::File>> {
            let p = dir.join(name);
            fs::File::create(&p).map(BufWriter::new).map_err(|e| Error::io(&p, e))
        };
        let mut audit = open(UNCERTAIN_UNITS)?;
        let mut errors = open(CONVERSION_ERRORS)?;
        let (mut rows_in, mut rows_out, mut held, mut failed) = (0, 0, 0, 0);
        let mut per = Vec::new();
        for ((name, _), input) in BASIS_INPUTS.iter().zip(&inputs) {
            let s = basis::emit_dual_basis(
                input,
                name,
                &self.dictionary,
                &self.masses,
                &self.lexicon,
                &dir,
                &mut audit,
                &mut errors,
            )?;
            rows_in += s.rows_in;
            rows_out += s.rows_out;
            held += s.held_uncertain;
            failed += s.conversion_errors;
            per.push(s);
        }
        for (w, name) in [(&mut audit, UNCERTAIN_UNITS), (&mut errors, CONVERSION_ERRORS)] {
            w.flush().map_err(|e| Error::io(dir.join(name), e))?;
        }
        let drops = drops_of([("uncertain_unit", held), ("conversion_error", failed)]);
        Ok((rows_in, rows_out, drops, json!({ "datasets": per })))
    }

    fn load_reference(&self, path: &Option<PathBuf>) -> Result<Dataset> {
        match path {
            Some(p) => Dataset::load(p, &self.lexicon),
            None => Ok(Dataset::default()),
        }
    }

    fn compare(&self) -> Result<StageTotals> {
        let dir = self.layout.basis_dir();
        let mut parts = Vec::new();
        for (name, _) in BASIS_INPUTS {
            let p = dir.join(basis::molpct_name(name));
            require(&p, "basis")?;
            parts.push(Dataset::load(&p, &self.lexicon)?);
        }
        let patents = Dataset::concat(&parts);
        let c = &self.config.compare;
        let ref_a = self.load_reference(&self.config.paths.reference_a)?;
        let ref_b = self.load_reference(&self.config.paths.reference_b)?;
        let years = compare::patents_per_year(self.publication_years(&patents));
        let settings = ExportSettings {
            precision: c.key_precision,
            bins: c.bins,
            violin_oxides: c.violin_oxides.clone(),
        };
        let s = compare::export_all(
            &patents,
            [(&c.reference_a_name, &ref_a), (&c.reference_b_name, &ref_b)],
            &years,
            &settings,
            &self.layout.compare_dir(),
        )?;
        let n = patents.len();
        let details = json!({
            "reference_rows": [ref_a.len(), ref_b.len()],
            "subset_report": s.report,
            "files": s.files,
        });
        Ok((n, n, BTreeMap::new(), details))
    }

    /// Publication year of every distinct patent contributing rows.
    fn publication_years(&self, patents: &Dataset) -> Vec<i32> {
        let pubs: BTreeSet<String> = patents
            .records
            .iter()
            .filter_map(|r| r.tag(&patents.schema, PATENT_ID))
            .filter(|t| !t.is_empty())
            .map(PatentId::publication_of)
            .collect();
        let dir = self.layout.records();
        pubs.iter()
            .filter_map(|p| {
                let path = ingest::record_path(&dir, p);
                match PatentRecord::load(&path) {
                    Ok(r) => r.publication_year(),
                    Err(e) => {
                        log::warn!("no publication year for {p}: {e}");
                        None
                    }
                }
            })
            .collect()
    }
}

type StageTotals = (usize, usize, BTreeMap<String, usize>, serde_json::Value);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_round_trip() {
        for s in Stage::ALL {
            assert_eq!(s.as_str().parse::<Stage>().unwrap(), s);
        }
        assert!("bogus".parse::<Stage>().is_err());
    }

    #[test]
    fn relative_paths_resolve_against_base() {
        let mut c = PipelineConfig::default();
        c.paths.urls = Some("urls.txt".into());
        c.paths.out = "/abs/out".into();
        c.resolve_paths(Path::new("/cfg"));
        assert_eq!(c.paths.urls.unwrap(), PathBuf::from("/cfg/urls.txt"));
        assert_eq!(c.paths.corpus, PathBuf::from("/cfg/corpus"));
        assert_eq!(c.paths.out, PathBuf::from("/abs/out"));
    }

    #[test]
    fn missing_input_names_producer() {
        let d = tempfile::tempdir().unwrap();
        let mut c = PipelineConfig::default();
        c.paths.out = d.path().join("out");
        let p = Pipeline::new(c).unwrap();
        for (stage, producer) in [
            (Stage::Extract, "ingest"),
            (Stage::Consolidate, "extract"),
            (Stage::Filter, "consolidate"),
            (Stage::Optics, "filter"),
            (Stage::Liquidus, "filter"),
            (Stage::Basis, "optics"),
            (Stage::Compare, "basis"),
        ] {
            match p.run_stage(stage) {
                Err(Error::MissingInput { producer: got, .. }) => assert_eq!(got, producer, "{stage}"),
                other => panic!("{stage}: {other:?}"),
            }
        }
    }

    #[test]
    fn config_validation() {
        let mut c = PipelineConfig::default();
        c.chunk_size = Some(0);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = PipelineConfig::default();
        c.paths.dictionary = Some("/nonexistent/dict.json".into());
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }
}
