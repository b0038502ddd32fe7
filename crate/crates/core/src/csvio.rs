//! CSV conventions shared by every stage: comma-delimited UTF-8, `\n` line
//! endings, quoting only where needed, and tolerant readers for ragged rows.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(writer(BufWriter::new(file)))
}

pub fn open(path: &Path) -> Result<csv::Reader<BufReader<File>>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(BufReader::new(file)))
}

/// Header labels with repeats made unique the way dataframe readers do it:
/// the second `n` becomes `n.1`, the third `n.2`, and so on.
pub fn dedup_labels<'a>(labels: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for label in labels {
        let mut candidate = label.to_string();
        let mut k = 0;
        while out.contains(&candidate) {
            k += 1;
            candidate = format!("{label}.{k}");
        }
        out.push(candidate);
    }
    out
}

/// Writes through a temporary sibling and renames into place.
pub fn replace_atomically(
    path: &Path,
    fill: impl FnOnce(&mut csv::Writer<BufWriter<File>>) -> Result<()>,
) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    {
        let mut w = create(&tmp)?;
        fill(&mut w)?;
        w.flush().map_err(|e| Error::io(&tmp, e))?;
    }
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_get_suffixes() {
        assert_eq!(
            dedup_labels(["n", "sio2", "n", "n", "n.1"]),
            vec!["n", "sio2", "n.1", "n.2", "n.1.1"]
        );
    }
}
