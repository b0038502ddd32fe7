//! Numeric composition/property datasets as produced after filtering.
//!
//! Columns fall in three roles: oxide amounts (canonical formulas from the
//! lexicon), numeric properties, and string tags (`patent_id`, `unit`,
//! `condition`, ...). On disk the column order is always oxides, properties,
//! tags.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use crate::csvio;
use crate::error::{Error, Result};
use crate::filter::coerce_numeric;
use crate::tabular::CompoundLexicon;

/// Columns that hold text rather than numbers.
pub const TAG_COLUMNS: [&str; 4] = [crate::PATENT_ID, crate::UNIT, "condition", "source"];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    pub oxides: Vec<String>,
    pub properties: Vec<String>,
    pub tags: Vec<String>,
}

impl Schema {
    pub fn new(oxides: Vec<String>, properties: Vec<String>, tags: Vec<String>) -> Self {
        Self {
            oxides,
            properties,
            tags,
        }
    }

    /// Sorts raw labels into roles.
    pub fn classify(labels: &[String], lexicon: &CompoundLexicon) -> Self {
        let mut schema = Schema::default();
        for l in labels {
            if TAG_COLUMNS.contains(&l.as_str()) {
                schema.tags.push(l.clone());
            } else if lexicon.contains(l) {
                schema.oxides.push(l.clone());
            } else {
                schema.properties.push(l.clone());
            }
        }
        schema
    }

    pub fn labels(&self) -> Vec<String> {
        self.oxides
            .iter()
            .chain(&self.properties)
            .chain(&self.tags)
            .cloned()
            .collect()
    }

    pub fn width(&self) -> usize {
        self.oxides.len() + self.properties.len()
    }

    pub fn oxide_index(&self, oxide: &str) -> Option<usize> {
        self.oxides.iter().position(|o| o == oxide)
    }

    /// Index into `Record::values`.
    pub fn property_index(&self, label: &str) -> Option<usize> {
        self.properties
            .iter()
            .position(|p| p == label)
            .map(|i| i + self.oxides.len())
    }

    pub fn tag_index(&self, tag: &str) -> Option<usize> {
        self.tags.iter().position(|t| t == tag)
    }
}

/// One row: oxide amounts then property values in `values`, tag strings in
/// `tags`, both positional against a [`Schema`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    pub values: Vec<f64>,
    pub tags: Vec<String>,
}

impl Record {
    pub fn oxides<'a>(&'a self, schema: &Schema) -> &'a [f64] {
        &self.values[..schema.oxides.len()]
    }

    pub fn properties<'a>(&'a self, schema: &Schema) -> &'a [f64] {
        &self.values[schema.oxides.len()..]
    }

    pub fn tag<'a>(&'a self, schema: &Schema, name: &str) -> Option<&'a str> {
        schema
            .tag_index(name)
            .and_then(|i| self.tags.get(i))
            .map(String::as_str)
    }

    pub fn property(&self, schema: &Schema, label: &str) -> Option<f64> {
        schema.property_index(label).map(|i| self.values[i])
    }

    pub fn cells(&self) -> Vec<String> {
        self.values
            .iter()
            .map(|v| format_number(*v))
            .chain(self.tags.iter().cloned())
            .collect()
    }
}

/// Shortest representation that parses back to the same value; zero is `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// Streaming reader over a dataset CSV.
pub struct DatasetReader {
    path: PathBuf,
    schema: Schema,
    /// For every input column: where it lands (value index or tag index).
    targets: Vec<Target>,
    reader: csv::Reader<BufReader<File>>,
    record: csv::StringRecord,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Value(usize),
    Tag(usize),
}

impl DatasetReader {
    pub fn open(path: &Path, lexicon: &CompoundLexicon) -> Result<Self> {
        let mut reader = csvio::open(path)?;
        let header = reader.headers().map_err(|e| Error::csv(path, e))?;
        let labels = csvio::dedup_labels(header.iter());
        let schema = Schema::classify(&labels, lexicon);
        let targets = labels
            .iter()
            .map(|l| {
                if let Some(i) = schema.tag_index(l) {
                    Target::Tag(i)
                } else if let Some(i) = schema.oxide_index(l) {
                    Target::Value(i)
                } else {
                    Target::Value(schema.property_index(l).expect("classified"))
                }
            })
            .collect();
        Ok(Self {
            path: path.to_path_buf(),
            schema,
            targets,
            reader,
            record: csv::StringRecord::new(),
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn next_record(&mut self) -> Result<Option<Record>> {
        if !self
            .reader
            .read_record(&mut self.record)
            .map_err(|e| Error::csv(&self.path, e))?
        {
            return Ok(None);
        }
        let mut out = Record {
            values: vec![0.0; self.schema.width()],
            tags: vec![String::new(); self.schema.tags.len()],
        };
        for (cell, target) in self.record.iter().zip(&self.targets) {
            match *target {
                Target::Value(i) => out.values[i] = coerce_numeric(Some(cell)),
                Target::Tag(i) => out.tags[i] = cell.to_string(),
            }
        }
        Ok(Some(out))
    }
}

impl Iterator for DatasetReader {
    type Item = Result<Record>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_record().transpose()
    }
}

pub struct DatasetWriter {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl DatasetWriter {
    pub fn create(path: &Path, schema: &Schema) -> Result<Self> {
        let mut writer = csvio::create(path)?;
        writer
            .write_record(schema.labels())
            .map_err(|e| Error::csv(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            writer,
        })
    }

    pub fn write(&mut self, record: &Record) -> Result<()> {
        self.writer
            .write_record(record.cells())
            .map_err(|e| Error::csv(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }
}

/// A whole dataset in memory.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub schema: Schema,
    pub records: Vec<Record>,
}

impl Dataset {
    pub fn load(path: &Path, lexicon: &CompoundLexicon) -> Result<Self> {
        let reader = DatasetReader::open(path, lexicon)?;
        let schema = reader.schema().clone();
        let records = reader.collect::<Result<Vec<_>>>()?;
        Ok(Self { schema, records })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = DatasetWriter::create(path, &self.schema)?;
        for r in &self.records {
            w.write(r)?;
        }
        w.finish()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Oxide amounts of one row keyed by formula.
    pub fn composition(&self, row: usize) -> HashMap<&str, f64> {
        self.schema
            .oxides
            .iter()
            .map(String::as_str)
            .zip(self.records[row].oxides(&self.schema).iter().copied())
            .collect()
    }

    /// Concatenates datasets under the union of their schemas. Missing values
    /// become 0 and missing tags empty strings.
    pub fn concat(parts: &[Dataset]) -> Dataset {
        let mut schema = Schema::default();
        for p in parts {
            for (dst, src) in [
                (&mut schema.oxides, &p.schema.oxides),
                (&mut schema.properties, &p.schema.properties),
                (&mut schema.tags, &p.schema.tags),
            ] {
                for l in src {
                    if !dst.contains(l) {
                        dst.push(l.clone());
                    }
                }
            }
        }
        let mut records = Vec::new();
        for p in parts {
            let value_map: Vec<usize> = p
                .schema
                .oxides
                .iter()
                .map(|o| schema.oxide_index(o).unwrap())
                .chain(
                    p.schema
                        .properties
                        .iter()
                        .map(|l| schema.property_index(l).unwrap()),
                )
                .collect();
            let tag_map: Vec<usize> = p
                .schema
                .tags
                .iter()
                .map(|t| schema.tag_index(t).unwrap())
                .collect();
            for r in &p.records {
                let mut out = Record {
                    values: vec![0.0; schema.width()],
                    tags: vec![String::new(); schema.tags.len()],
                };
                for (v, &i) in r.values.iter().zip(&value_map) {
                    out.values[i] = *v;
                }
                for (t, &i) in r.tags.iter().zip(&tag_map) {
                    out.tags[i] = t.clone();
                }
                records.push(out);
            }
        }
        Dataset { schema, records }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_any_column_order_and_writes_canonical_order() {
        let d = tempfile::tempdir().unwrap();
        let p = d.path().join("x.csv");
        std::fs::write(&p, "patent_id,nD,SiO2,unit,Na2O\nus1_b0,1.5,70,mol,30\nus1_b0,-,,none,100\n")
            .unwrap();
        let lex = CompoundLexicon::builtin();
        let ds = Dataset::load(&p, &lex).unwrap();
        assert_eq!(ds.schema.oxides, vec!["SiO2", "Na2O"]);
        assert_eq!(ds.schema.properties, vec!["nD"]);
        assert_eq!(ds.schema.tags, vec!["patent_id", "unit"]);
        assert_eq!(ds.records[0].values, vec![70.0, 30.0, 1.5]);
        assert_eq!(ds.records[1].values, vec![0.0, 100.0, 0.0]);
        let out = d.path().join("y.csv");
        ds.save(&out).unwrap();
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            "SiO2,Na2O,nD,patent_id,unit\n70,30,1.5,us1_b0,mol\n0,100,0,us1_b0,none\n"
        );
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.95), "1.95");
        assert_eq!(format_number(673.0), "673");
        assert_eq!(format_number(0.1 + 0.2), "0.30000000000000004");
    }

    #[test]
    fn concat_unions_schemas() {
        let a = Dataset {
            schema: Schema::new(vec!["SiO2".into()], vec!["nD".into()], vec![]),
            records: vec![Record {
                values: vec![100.0, 1.5],
                tags: vec![],
            }],
        };
        let b = Dataset {
            schema: Schema::new(
                vec!["Na2O".into(), "SiO2".into()],
                vec![],
                vec!["source".into()],
            ),
            records: vec![Record {
                values: vec![30.0, 70.0],
                tags: vec!["B".into()],
            }],
        };
        let c = Dataset::concat(&[a, b]);
        assert_eq!(c.schema.oxides, vec!["SiO2", "Na2O"]);
        assert_eq!(c.records[0].values, vec![100.0, 0.0, 1.5]);
        assert_eq!(c.records[1].values, vec![70.0, 30.0, 0.0]);
        assert_eq!(c.records[1].tags, vec!["B"]);
        assert_eq!(c.records[0].tags, vec![""]);
    }
}
