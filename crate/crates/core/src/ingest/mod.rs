//! Patent page acquisition: URL lists, the page cache, metadata and table
//! section extraction, and per-patent JSON records.

mod control;
mod fetch;
mod metadata;
mod patent_id;

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use control::ControlList;
pub use fetch::{cache_key, validate_url, FetchError, FetchPolicy, Fetcher, FetcherConfig};
pub use metadata::{extract_metadata, extract_table_sections, publication_from_url};
pub use patent_id::PatentId;

use crate::error::{Error, Result};

pub const ABSENT_TABLES: &str = "absent_tables.txt";
pub const FETCH_FAILURES: &str = "fetch_failures.txt";

/// One scraped patent page. Field names on disk follow the record layout used
/// by the scraper (`type`, `date`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatentRecord {
    pub url: String,
    pub title: String,
    #[serde(rename = "type")]
    pub doc_type: String,
    pub description: String,
    pub application_number: String,
    pub publication_number: String,
    pub pdf_url: String,
    pub inventors: Vec<String>,
    pub assignee: String,
    #[serde(rename = "date")]
    pub dates: Vec<String>,
    pub html_tables: Vec<String>,
}

impl PatentRecord {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Publication year, taken from the last date entry (the publication date
    /// when both dates are present).
    pub fn publication_year(&self) -> Option<i32> {
        self.dates.iter().rev().find_map(|d| year_of(d))
    }
}

fn year_of(date: &str) -> Option<i32> {
    // First run of four digits (a year) or eight digits (yyyymmdd).
    let bytes = date.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if !bytes[i].is_ascii_digit() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if matches!(i - start, 4 | 8) {
            return date[start..start + 4].parse().ok();
        }
    }
    None
}

/// Reads a URL list: one URL per line, whitespace trimmed, blank lines dropped,
/// exact duplicates removed keeping the first occurrence.
pub fn load_url_list(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut seen = HashSet::new();
    let urls: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .filter(|l| seen.insert(l.to_string()))
        .map(str::to_string)
        .collect();
    if urls.is_empty() {
        log::warn!("{} contains no URLs", path.display());
    }
    Ok(urls)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SerializeOutcome {
    Written(PathBuf),
    Skipped(PathBuf),
}

pub fn record_path(out_dir: &Path, publication_number: &str) -> PathBuf {
    out_dir.join(format!("{}.json", publication_number.to_ascii_uppercase()))
}

/// Writes `<PUBLICATION_NUMBER>.json`. An existing file is never overwritten.
pub fn serialize_record(record: &PatentRecord, out_dir: &Path) -> Result<SerializeOutcome> {
    if record.publication_number.trim().is_empty() {
        return Err(Error::MissingPublicationNumber {
            url: record.url.clone(),
        });
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = record_path(out_dir, &record.publication_number);
    let mut file = match OpenOptions::new().write(true).create_new(true).open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
            return Ok(SerializeOutcome::Skipped(path))
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut body = serde_json::to_string_pretty(record).expect("record serializes");
    body.push('\n');
    file.write_all(body.as_bytes())
        .map_err(|e| Error::io(&path, e))?;
    Ok(SerializeOutcome::Written(path))
}

/// Per-URL result of an ingest run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestOutcome {
    Written(String),
    SkippedExisting(String),
    AbsentTables,
    FetchFailed(String),
    Malformed(String),
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct IngestSummary {
    pub urls: usize,
    pub written: usize,
    pub skipped_existing: usize,
    pub absent_tables: usize,
    pub fetch_failed: usize,
    pub malformed: usize,
}

/// Fetches (or loads) every URL and writes one JSON record per patent that has
/// table sections. Control lists are rewritten on every run so that repeated
/// runs over the same inputs leave an identical directory.
pub fn ingest_urls(
    urls: &[String],
    fetcher: &Fetcher,
    records_dir: &Path,
    workers: usize,
) -> Result<(IngestSummary, Vec<IngestOutcome>)> {
    fs::create_dir_all(records_dir).map_err(|e| Error::io(records_dir, e))?;
    let absent = ControlList::create(&records_dir.join(ABSENT_TABLES))?;
    let failures = ControlList::create(&records_dir.join(FETCH_FAILURES))?;

    let process = |url: &String| -> Result<IngestOutcome> {
        if let Err(e) = validate_url(url) {
            return Ok(IngestOutcome::Malformed(e.to_string()));
        }
        if let Some(pub_no) = publication_from_url(url) {
            if record_path(records_dir, &pub_no).exists() {
                return Ok(IngestOutcome::SkippedExisting(pub_no));
            }
        }
        let html = match fetcher.fetch_or_load(url) {
            Ok(fetched) => fetched.html,
            Err(e) => return Ok(IngestOutcome::FetchFailed(e.to_string())),
        };
        let mut record = extract_metadata(url, &html);
        record.html_tables = extract_table_sections(&html);
        if record.html_tables.is_empty() {
            return Ok(IngestOutcome::AbsentTables);
        }
        Ok(match serialize_record(&record, records_dir)? {
            SerializeOutcome::Written(_) => IngestOutcome::Written(record.publication_number),
            SerializeOutcome::Skipped(_) => {
                IngestOutcome::SkippedExisting(record.publication_number)
            }
        })
    };

    let outcomes: Vec<IngestOutcome> = if workers <= 1 {
        urls.iter().map(process).collect::<Result<_>>()?
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<Result<IngestOutcome>>>> =
            urls.iter().map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers.min(urls.len().max(1)) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= urls.len() {
                        break;
                    }
                    let outcome = process(&urls[i]);
                    *slots[i].lock().unwrap() = Some(outcome);
                });
            }
        });
        slots
            .into_iter()
            .map(|s| s.into_inner().unwrap().expect("every slot filled"))
            .collect::<Result<_>>()?
    };

    let mut summary = IngestSummary {
        urls: urls.len(),
        ..Default::default()
    };
    for (url, outcome) in urls.iter().zip(&outcomes) {
        match outcome {
            IngestOutcome::Written(_) => summary.written += 1,
            IngestOutcome::SkippedExisting(_) => summary.skipped_existing += 1,
            IngestOutcome::AbsentTables => {
                summary.absent_tables += 1;
                absent.append(url)?;
            }
            IngestOutcome::FetchFailed(reason) => {
                summary.fetch_failed += 1;
                log::warn!("fetch failed for {url}: {reason}");
                failures.append(url)?;
            }
            IngestOutcome::Malformed(reason) => {
                summary.malformed += 1;
                log::warn!("{reason}");
                failures.append(url)?;
            }
        }
    }
    absent.flush()?;
    failures.flush()?;
    Ok((summary, outcomes))
}

/// All records in a directory, sorted by file name.
pub fn load_records(records_dir: &Path) -> Result<Vec<PatentRecord>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(records_dir)
        .map_err(|e| Error::io(records_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| PatentRecord::load(p)).collect()
}
