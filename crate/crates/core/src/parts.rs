//! Restartable chunked output: rows are processed in fixed-size chunks, each
//! chunk lands in its own `part_<n>.csv`, and parts already on disk from an
//! identical earlier run are kept instead of rewritten.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::consolidate::{merge_files, ConsolidateSummary};
use crate::csvio;
use crate::error::{Error, Result};
use crate::filter::coerce_numeric;
use crate::PATENT_ID;

const MANIFEST: &str = "parts.manifest";

pub fn part_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("part_{n}.csv"))
}

/// Part files in `dir`, ordered by part number.
pub fn list_parts(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found: Vec<(usize, PathBuf)> = Vec::new();
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let n = path
            .file_name()
            .and_then(|f| f.to_str())
            .and_then(|f| f.strip_prefix("part_"))
            .and_then(|f| f.strip_suffix(".csv"))
            .and_then(|f| f.parse::<usize>().ok());
        if let Some(n) = n {
            found.push((n, path));
        }
    }
    found.sort();
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

/// Digest of an input file's size and modification time plus `extra`
/// (settings that shape the output).
pub fn input_fingerprint(input: &Path, extra: &str) -> Result<String> {
    let meta = fs::metadata(input).map_err(|e| Error::io(input, e))?;
    let mtime = meta
        .modified()
        .ok()
        .and_then(|t| t.duration_since(std::time::UNIX_EPOCH).ok())
        .map_or(0, |d| d.as_nanos());
    let mut h = Sha256::new();
    h.update(format!("{}|{mtime}|", meta.len()));
    h.update(extra);
    Ok(hex::encode(h.finalize()))
}

#[derive(Debug, Clone)]
pub struct PartPlan {
    pub dir: PathBuf,
    pub chunk_size: usize,
    pub header: Vec<String>,
    /// Identifies the input and settings. Parts left by a run with a
    /// different fingerprint are discarded.
    pub fingerprint: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartsOutcome {
    pub parts: Vec<PathBuf>,
    pub reused: Vec<usize>,
    pub written: Vec<usize>,
}

/// Feeds every item through `process` and writes the returned rows chunk by
/// chunk. Items are always processed (so counters kept by `process` see the
/// whole input) but a chunk whose part file already exists is not rewritten.
pub fn run_parts<T, I, F>(plan: &PartPlan, items: I, mut process: F) -> Result<PartsOutcome>
where
    I: Iterator<Item = Result<T>>,
    F: FnMut(T) -> Result<Vec<Vec<String>>>,
{
    if plan.chunk_size == 0 {
        return Err(Error::Config("chunk_size must be at least 1".into()));
    }
    fs::create_dir_all(&plan.dir).map_err(|e| Error::io(&plan.dir, e))?;
    let manifest = plan.dir.join(MANIFEST);
    let previous = fs::read_to_string(&manifest).ok();
    if previous.as_deref() != Some(plan.fingerprint.as_str()) {
        for p in list_parts(&plan.dir)? {
            fs::remove_file(&p).map_err(|e| Error::io(&p, e))?;
        }
        fs::write(&manifest, &plan.fingerprint).map_err(|e| Error::io(&manifest, e))?;
    }

    let mut outcome = PartsOutcome::default();
    let mut items = items.peekable();
    let mut n = 0;
    loop {
        n += 1;
        if n > 1 && items.peek().is_none() {
            break;
        }
        let path = part_path(&plan.dir, n);
        let reuse = path.is_file();
        let tmp = path.with_extension("csv.tmp");
        let mut writer = if reuse {
            None
        } else {
            let mut w = csvio::create(&tmp)?;
            w.write_record(&plan.header)
                .map_err(|e| Error::csv(&tmp, e))?;
            Some(w)
        };
        let mut taken = 0;
        while taken < plan.chunk_size {
            let Some(item) = items.next() else { break };
            taken += 1;
            let rows = process(item?)?;
            if let Some(w) = writer.as_mut() {
                for row in rows {
                    w.write_record(&row).map_err(|e| Error::csv(&tmp, e))?;
                }
            }
        }
        if let Some(mut w) = writer {
            w.flush().map_err(|e| Error::io(&tmp, e))?;
            drop(w);
            fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
            outcome.written.push(n);
        } else {
            outcome.reused.push(n);
        }
        outcome.parts.push(path);
        if taken < plan.chunk_size {
            break;
        }
    }
    for stale in list_parts(&plan.dir)?
        .into_iter()
        .filter(|p| !outcome.parts.contains(p))
    {
        fs::remove_file(&stale).map_err(|e| Error::io(&stale, e))?;
    }
    Ok(outcome)
}

/// Merges parts with the shared consolidation routine, filling absent cells
/// with `0`, then drops columns that are zero in every row.
pub fn merge_parts(
    parts: &[PathBuf],
    out: &Path,
    protected: &[&str],
) -> Result<ConsolidateSummary> {
    let protected: HashSet<String> = protected.iter().map(|s| s.to_string()).collect();
    let summary = merge_files(parts, out, "0", |_| false)?;
    let header = crate::consolidate::read_header(out)?;
    let zero_cols = zero_columns(out, &header)?;
    let drop: Vec<String> = zero_cols
        .into_iter()
        .filter(|l| !protected.contains(l))
        .collect();
    let pruned = if drop.is_empty() {
        Vec::new()
    } else {
        drop_columns(out, &header, &drop)?;
        drop
    };
    Ok(ConsolidateSummary {
        pruned_columns: pruned,
        ..summary
    })
}

fn zero_columns(path: &Path, header: &[String]) -> Result<Vec<String>> {
    let mut nonzero = vec![false; header.len()];
    let mut reader = csvio::open(path)?;
    let mut record = csv::StringRecord::new();
    while reader
        .read_record(&mut record)
        .map_err(|e| Error::csv(path, e))?
    {
        for (i, cell) in record.iter().enumerate().take(header.len()) {
            if !nonzero[i] && (coerce_numeric(Some(cell)) != 0.0 || !is_numeric_or_blank(cell)) {
                nonzero[i] = true;
            }
        }
    }
    Ok(header
        .iter()
        .zip(nonzero)
        .filter(|(_, nz)| !nz)
        .map(|(l, _)| l.clone())
        .collect())
}

fn is_numeric_or_blank(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t.parse::<f64>().is_ok()
}

fn drop_columns(path: &Path, header: &[String], drop: &[String]) -> Result<()> {
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| !drop.contains(&header[i]))
        .collect();
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
    })
}

/// Property label → patent ids having at least one non-zero value there, in
/// column order and first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContributionsReport {
    pub entries: Vec<(String, Vec<String>)>,
}

impl ContributionsReport {
    /// Scans a merged output for the given property columns.
    pub fn scan(path: &Path, properties: &[String]) -> Result<Self> {
        let header = crate::consolidate::read_header(path)?;
        let id = header
            .iter()
            .position(|l| l == PATENT_ID)
            .ok_or_else(|| Error::DataFile {
                path: path.to_path_buf(),
                reason: format!("no {PATENT_ID} column"),
            })?;
        let cols: Vec<(usize, &String)> = properties
            .iter()
            .filter_map(|p| header.iter().position(|l| l == p).map(|i| (i, p)))
            .collect();
        let mut lists: Vec<Vec<String>> = vec![Vec::new(); cols.len()];
        let mut seen: Vec<HashSet<String>> = vec![HashSet::new(); cols.len()];
        let mut reader = csvio::open(path)?;
        let mut record = csv::StringRecord::new();
        while reader
            .read_record(&mut record)
            .map_err(|e| Error::csv(path, e))?
        {
            let pid = record.get(id).unwrap_or("");
            for (k, (i, _)) in cols.iter().enumerate() {
                if coerce_numeric(record.get(*i)) != 0.0 && seen[k].insert(pid.to_string()) {
                    lists[k].push(pid.to_string());
                }
            }
        }
        Ok(Self {
            entries: cols
                .into_iter()
                .map(|(_, l)| l.clone())
                .zip(lists)
                .collect(),
        })
    }

    pub fn get(&self, label: &str) -> Option<&[String]> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        csvio::replace_atomically(path, |w| {
            w.write_record(["property_label", PATENT_ID])
                .map_err(|e| Error::csv(path, e))?;
            for (label, ids) in &self.entries {
                for id in ids {
                    w.write_record([label, id]).map_err(|e| Error::csv(path, e))?;
                }
            }
            Ok(())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(dir: &Path, chunk: usize) -> PartPlan {
        PartPlan {
            dir: dir.to_path_buf(),
            chunk_size: chunk,
            header: vec!["x".into(), "y".into()],
            fingerprint: format!("test|{chunk}"),
        }
    }

    fn rows(n: usize) -> impl Iterator<Item = Result<usize>> {
        (0..n).map(Ok)
    }

    fn echo(i: usize) -> Result<Vec<Vec<String>>> {
        Ok(vec![vec![i.to_string(), "0".into()]])
    }

    #[test]
    fn chunk_count_and_exact_multiple() {
        let d = tempfile::tempdir().unwrap();
        let out = run_parts(&plan(d.path(), 10), rows(25), echo).unwrap();
        assert_eq!(out.parts.len(), 3);
        let d2 = tempfile::tempdir().unwrap();
        let out = run_parts(&plan(d2.path(), 5), rows(10), echo).unwrap();
        assert_eq!(out.parts.len(), 2);
        let d3 = tempfile::tempdir().unwrap();
        let out = run_parts(&plan(d3.path(), 5), rows(0), echo).unwrap();
        assert_eq!(out.parts.len(), 1);
    }

    #[test]
    fn deleted_part_is_regenerated_others_reused() {
        let d = tempfile::tempdir().unwrap();
        let p = plan(d.path(), 4);
        run_parts(&p, rows(10), echo).unwrap();
        let merged_a = d.path().join("a.csv");
        merge_parts(&list_parts(d.path()).unwrap(), &merged_a, &[]).unwrap();
        fs::remove_file(part_path(d.path(), 2)).unwrap();
        let again = run_parts(&p, rows(10), echo).unwrap();
        assert_eq!(again.reused, vec![1, 3]);
        assert_eq!(again.written, vec![2]);
        let merged_b = d.path().join("b.csv");
        merge_parts(&again.parts, &merged_b, &[]).unwrap();
        assert_eq!(fs::read(&merged_a).unwrap(), fs::read(&merged_b).unwrap());
    }

    #[test]
    fn changed_fingerprint_discards_old_parts() {
        let d = tempfile::tempdir().unwrap();
        run_parts(&plan(d.path(), 2), rows(10), echo).unwrap();
        assert_eq!(list_parts(d.path()).unwrap().len(), 5);
        let out = run_parts(&plan(d.path(), 5), rows(10), echo).unwrap();
        assert!(out.reused.is_empty());
        assert_eq!(list_parts(d.path()).unwrap().len(), 2);
    }

    #[test]
    fn merge_drops_all_zero_columns_but_keeps_protected() {
        let d = tempfile::tempdir().unwrap();
        let out = run_parts(&plan(d.path(), 3), rows(5), echo).unwrap();
        let merged = d.path().join("m.csv");
        let s = merge_parts(&out.parts, &merged, &[]).unwrap();
        assert_eq!(s.pruned_columns, vec!["y"]);
        assert_eq!(fs::read_to_string(&merged).unwrap(), "x\n0\n1\n2\n3\n4\n");
        let s = merge_parts(&out.parts, &merged, &["x", "y"]).unwrap();
        assert!(s.pruned_columns.is_empty());
    }

    #[test]
    fn text_columns_are_not_zero_columns() {
        let d = tempfile::tempdir().unwrap();
        let f = d.path().join("f.csv");
        fs::write(&f, "a,b,patent_id\n0,-,us1_b0\n0,,us2_b1\n").unwrap();
        let cols = zero_columns(&f, &["a".into(), "b".into(), "patent_id".into()]).unwrap();
        assert_eq!(cols, vec!["a"]);
    }

    #[test]
    fn contributions_list_only_nonzero_patents() {
        let d = tempfile::tempdir().unwrap();
        let f = d.path().join("f.csv");
        fs::write(&f, "SiO2,nd,tliq,patent_id\n100,1.5,0,X\n100,0,900,Y\n100,1.6,0,X\n").unwrap();
        let r = ContributionsReport::scan(&f, &["nd".into(), "tliq".into()]).unwrap();
        assert_eq!(r.get("nd").unwrap(), ["X"]);
        assert_eq!(r.get("tliq").unwrap(), ["Y"]);
        let out = d.path().join("c.csv");
        r.save(&out).unwrap();
        assert_eq!(
            fs::read_to_string(out).unwrap(),
            "property_label,patent_id\nnd,X\ntliq,Y\n"
        );
    }
}
