//! Streaming merge of many CSV files under one schema.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::csvio;
use crate::error::{Error, Result};
use crate::PATENT_ID;

/// Column labels of all inputs, unique, in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchemaUnion {
    labels: Vec<String>,
}

impl SchemaUnion {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn push(&mut self, label: &str) {
        if !self.labels.iter().any(|l| l == label) {
            self.labels.push(label.to_string());
        }
    }
}

impl FromIterator<String> for SchemaUnion {
    fn from_iter<T: IntoIterator<Item = String>>(iter: T) -> Self {
        let mut schema = SchemaUnion::default();
        for l in iter {
            schema.push(&l);
        }
        schema
    }
}

/// Header of one CSV file, with repeated labels made unique.
pub fn read_header(path: &Path) -> Result<Vec<String>> {
    let mut reader = csvio::open(path)?;
    let header = reader.headers().map_err(|e| Error::csv(path, e))?;
    if header.is_empty() || header.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::DataFile {
            path: path.to_path_buf(),
            reason: "empty header".into(),
        });
    }
    Ok(csvio::dedup_labels(header.iter()))
}

/// Unions the header lines of `paths` without reading any data rows. Files
/// whose header cannot be read are skipped with a warning.
pub fn union_headers(paths: &[PathBuf]) -> Result<(SchemaUnion, Vec<PathBuf>)> {
    let mut schema = SchemaUnion::default();
    let mut unreadable = Vec::new();
    let mut valid = 0;
    for path in paths {
        match read_header(path) {
            Ok(labels) => {
                valid += 1;
                for l in &labels {
                    schema.push(l);
                }
            }
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                unreadable.push(path.clone());
            }
        }
    }
    if valid == 0 {
        return Err(Error::NoValidHeader(paths.len()));
    }
    Ok((schema, unreadable))
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct AppendCounts {
    pub read: usize,
    pub appended: usize,
    pub empty: usize,
}

/// Appends the rows of `path` to `out` reordered to `schema`. Columns absent
/// from the file get `fill`; columns absent from the schema are dropped. Rows
/// with nothing but empty cells (the `patent_id` tag aside) are skipped.
pub fn append_aligned<W: Write>(
    out: &mut csv::Writer<W>,
    path: &Path,
    schema: &SchemaUnion,
    fill: &str,
) -> Result<AppendCounts> {
    let mut reader = csvio::open(path)?;
    let header = reader.headers().map_err(|e| Error::csv(path, e))?;
    let labels = csvio::dedup_labels(header.iter());
    let targets: Vec<Option<usize>> = labels.iter().map(|l| schema.position(l)).collect();
    let id_col = labels.iter().position(|l| l == PATENT_ID);

    let mut counts = AppendCounts::default();
    let mut record = csv::StringRecord::new();
    let mut row: Vec<String> = vec![String::new(); schema.labels.len()];
    while reader
        .read_record(&mut record)
        .map_err(|e| Error::csv(path, e))?
    {
        counts.read += 1;
        let empty = record
            .iter()
            .enumerate()
            .all(|(i, c)| Some(i) == id_col || c.trim().is_empty());
        if empty {
            counts.empty += 1;
            continue;
        }
        row.iter_mut().for_each(|c| {
            c.clear();
            c.push_str(fill);
        });
        for (i, cell) in record.iter().enumerate() {
            if let Some(Some(t)) = targets.get(i) {
                row[*t].clear();
                row[*t].push_str(cell);
            }
        }
        out.write_record(&row).map_err(|source| Error::RowWrite {
            path: path.to_path_buf(),
            row: counts.read,
            source,
        })?;
        counts.appended += 1;
    }
    Ok(counts)
}

/// Rewrites `path` without the columns in which `is_empty` holds for every
/// row. Returns the removed labels.
pub fn prune_columns(path: &Path, is_empty: impl Fn(&str) -> bool) -> Result<Vec<String>> {
    let header = read_header(path)?;
    let mut has_value = vec![false; header.len()];
    {
        let mut reader = csvio::open(path)?;
        let mut record = csv::StringRecord::new();
        while reader
            .read_record(&mut record)
            .map_err(|e| Error::csv(path, e))?
        {
            for (i, cell) in record.iter().enumerate().take(header.len()) {
                if !has_value[i] && !is_empty(cell) {
                    has_value[i] = true;
                }
            }
        }
    }
    let removed: Vec<String> = header
        .iter()
        .zip(&has_value)
        .filter(|(_, keep)| !**keep)
        .map(|(l, _)| l.clone())
        .collect();
    if removed.is_empty() {
        return Ok(removed);
    }
    let keep: Vec<usize> = (0..header.len()).filter(|&i| has_value[i]).collect();
    csvio::replace_atomically(path, |w| {
        let mut reader = csvio::open(path)?;
        let mut record = csv::StringRecord::new();
        w.write_record(keep.iter().map(|&i| header[i].as_str()))
            .map_err(|e| Error::csv(path, e))?;
        while reader
            .read_record(&mut record)
            .map_err(|e| Error::csv(path, e))?
        {
            w.write_record(keep.iter().map(|&i| record.get(i).unwrap_or("")))
                .map_err(|e| Error::csv(path, e))?;
        }
        Ok(())
    })?;
    Ok(removed)
}

/// Removes columns that are empty in every row.
pub fn prune_empty_columns(path: &Path) -> Result<PathBuf> {
    prune_columns(path, |c| c.trim().is_empty())?;
    Ok(path.to_path_buf())
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ConsolidateSummary {
    pub files: usize,
    pub unreadable: Vec<PathBuf>,
    pub rows_read: usize,
    pub rows_written: usize,
    pub empty_rows: usize,
    pub pruned_columns: Vec<String>,
    pub per_file: HashMap<PathBuf, usize>,
}

/// Header union, single-header write, aligned vertical append of every file,
/// then empty-column pruning. No joins, no row deduplication.
pub fn merge_files(
    paths: &[PathBuf],
    out_path: &Path,
    fill: &str,
    prune: impl Fn(&str) -> bool,
) -> Result<ConsolidateSummary> {
    let (schema, unreadable) = union_headers(paths)?;
    let mut summary = ConsolidateSummary {
        files: paths.len(),
        ..Default::default()
    };
    csvio::replace_atomically(out_path, |w| {
        w.write_record(schema.labels())
            .map_err(|e| Error::csv(out_path, e))?;
        for path in paths.iter().filter(|p| !unreadable.contains(p)) {
            let counts = append_aligned(w, path, &schema, fill)?;
            summary.rows_read += counts.read;
            summary.rows_written += counts.appended;
            summary.empty_rows += counts.empty;
            summary.per_file.insert(path.clone(), counts.appended);
        }
        Ok(())
    })?;
    summary.pruned_columns = prune_columns(out_path, prune)?;
    summary.unreadable = unreadable;
    Ok(summary)
}

pub fn consolidate(paths: &[PathBuf], out_path: &Path) -> Result<ConsolidateSummary> {
    merge_files(paths, out_path, "", |c| c.trim().is_empty())
}

/// CSV files under `dir` (recursively), in sorted path order.
pub fn list_csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(|e| Error::io(&d, e))? {
            let path = entry.map_err(|e| Error::io(&d, e))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|x| x == "csv") {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}
