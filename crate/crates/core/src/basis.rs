//! Composition basis: resolving uncertain units from curated lists and
//! converting between mol% and wt%.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use crate::dictionary::Basis;
use crate::dataset::{DatasetReader, DatasetWriter, Record, Schema};
use crate::dictionary::CurationDictionary;
use crate::error::{Error, Result};
use crate::ingest::PatentId;
use crate::tabular::CompoundLexicon;
use crate::{PATENT_ID, UNIT};

const BUILTIN_MASSES: &str = include_str!("../data/molar_masses.txt");

/// Oxide formula → molar mass in g/mol.
#[derive(Debug, Clone, PartialEq)]
pub struct MolarMassTable {
    masses: BTreeMap<String, f64>,
}

impl MolarMassTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_MASSES).expect("shipped molar-mass table is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|reason| Error::DataFile {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// Two columns per line (formula, mass) separated by whitespace or a
    /// comma; `#` starts a comment.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut masses = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty());
            let (Some(formula), Some(mass), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(format!("line {}: expected `formula mass`", n + 1));
            };
            let mass: f64 = mass
                .parse()
                .map_err(|_| format!("line {}: bad mass {mass:?}", n + 1))?;
            if !(mass.is_finite() && mass > 0.0) {
                return Err(format!("line {}: mass must be positive", n + 1));
            }
            if masses.insert(formula.to_string(), mass).is_some() {
                return Err(format!("line {}: duplicate entry for {formula}", n + 1));
            }
        }
        Ok(Self { masses })
    }

    /// Fails listing every lexicon oxide without a mass.
    pub fn ensure_covers(&self, lexicon: &CompoundLexicon) -> Result<()> {
        let missing: Vec<String> = lexicon
            .formulas()
            .filter(|f| !self.masses.contains_key(*f))
            .map(String::from)
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingMolarMass(missing))
        }
    }

    pub fn get(&self, formula: &str) -> Option<f64> {
        self.masses.get(formula).copied()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConversionError {
    #[error("no molar mass for {}", .0.join(", "))]
    MissingMass(Vec<String>),
    #[error("composition is empty")]
    Empty,
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Normalized conversion without rounding. `divide` selects mass→mol.
fn convert_exact(x: &[f64], m: &[Option<f64>], names: &[String], divide: bool) -> std::result::Result<Vec<f64>, ConversionError> {
    let missing: Vec<String> = x
        .iter()
        .zip(m)
        .zip(names)
        .filter(|((v, m), _)| **v != 0.0 && m.is_none())
        .map(|(_, n)| n.clone())
        .collect();
    if !missing.is_empty() {
        return Err(ConversionError::MissingMass(missing));
    }
    let w: Vec<f64> = x
        .iter()
        .zip(m)
        .map(|(v, m)| match (*v, m) {
            (v, _) if v == 0.0 => 0.0,
            (v, Some(m)) if divide => v / m,
            (v, Some(m)) => v * m,
            _ => unreachable!(),
        })
        .collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return Err(ConversionError::Empty);
    }
    Ok(w.iter().map(|wi| wi / total * 100.0).collect())
}

fn masses_for(names: &[String], table: &MolarMassTable) -> Vec<Option<f64>> {
    names.iter().map(|n| table.get(n)).collect()
}

/// wt% → mol%, normalized to 100 and rounded to two decimals.
pub fn mass_to_mol(x: &[f64], oxides: &[String], table: &MolarMassTable) -> std::result::Result<Vec<f64>, ConversionError> {
    convert_exact(x, &masses_for(oxides, table), oxides, true).map(|y| y.into_iter().map(round2).collect())
}

/// mol% → wt%, normalized to 100 and rounded to two decimals.
pub fn mol_to_mass(x: &[f64], oxides: &[String], table: &MolarMassTable) -> std::result::Result<Vec<f64>, ConversionError> {
    convert_exact(x, &masses_for(oxides, table), oxides, false).map(|y| y.into_iter().map(round2).collect())
}

/// Unrounded variants, for checking the algebra.
pub fn mass_to_mol_exact(x: &[f64], oxides: &[String], table: &MolarMassTable) -> std::result::Result<Vec<f64>, ConversionError> {
    convert_exact(x, &masses_for(oxides, table), oxides, true)
}

pub fn mol_to_mass_exact(x: &[f64], oxides: &[String], table: &MolarMassTable) -> std::result::Result<Vec<f64>, ConversionError> {
    convert_exact(x, &masses_for(oxides, table), oxides, false)
}

pub fn patent_link(publication_number: &str) -> String {
    format!("https://patents.google.com/patent/{publication_number}/en")
}

/// Audit line for a row whose basis stays unknown.
pub fn audit_line(patent_id: &str, label: &str) -> String {
    format!("{} → {label}", patent_link(&PatentId::publication_of(patent_id)))
}

/// Basis of a row: its own unit when definite, else the curated list.
/// `Err` carries the uncertain label.
pub fn resolve_basis<'a>(unit: &'a str, patent_id: &str, dict: &CurationDictionary) -> std::result::Result<Basis, &'a str> {
    match unit.trim() {
        "mol" => Ok(Basis::Mol),
        "mass" => Ok(Basis::Mass),
        other => dict.basis_of(patent_id).ok_or(other),
    }
}

/// Rewrites uncertain `unit` tags in place where the dictionary knows the
/// patent. Rows still uncertain are written to `audit` and removed.
pub fn adjust_uncertain_units<W: Write>(
    schema: &Schema,
    records: Vec<Record>,
    dict: &CurationDictionary,
    audit: &mut W,
) -> std::io::Result<Vec<Record>> {
    let unit_i = schema.tag_index(UNIT);
    let mut out = Vec::with_capacity(records.len());
    for mut r in records {
        let pid = r.tag(schema, PATENT_ID).unwrap_or_default().to_string();
        let unit = unit_i.map_or("none", |i| r.tags[i].as_str());
        match resolve_basis(unit, &pid, dict) {
            Ok(b) => {
                if let Some(i) = unit_i {
                    r.tags[i] = b.as_str().to_string();
                }
                out.push(r);
            }
            Err(label) => writeln!(audit, "{}", audit_line(&pid, label))?,
        }
    }
    Ok(out)
}

/// Schema of the converted outputs: the input's minus `unit`.
pub fn converted_schema(schema: &Schema) -> Schema {
    Schema {
        tags: schema.tags.iter().filter(|t| *t != UNIT).cloned().collect(),
        ..schema.clone()
    }
}

fn strip_unit(schema: &Schema, r: &Record) -> Record {
    Record {
        values: r.values.clone(),
        tags: schema
            .tags
            .iter()
            .zip(&r.tags)
            .filter(|(t, _)| *t != UNIT)
            .map(|(_, v)| v.clone())
            .collect(),
    }
}

/// The same row on both bases. Rows already on a basis are copied as-is;
/// only the composition columns of the other copy are recomputed.
pub fn dual_basis(
    schema: &Schema,
    record: &Record,
    basis: Basis,
    table: &MolarMassTable,
) -> std::result::Result<(Record, Record), ConversionError> {
    let base = strip_unit(schema, record);
    let x = record.oxides(schema);
    let converted = match basis {
        Basis::Mol => mol_to_mass(x, &schema.oxides, table)?,
        Basis::Mass => mass_to_mol(x, &schema.oxides, table)?,
    };
    let mut other = base.clone();
    other.values[..schema.oxides.len()].copy_from_slice(&converted);
    Ok(match basis {
        Basis::Mol => (base, other),
        Basis::Mass => (other, base),
    })
}

pub fn molpct_name(property: &str) -> String {
    format!("{property}_molpct.csv")
}

pub fn wtpct_name(property: &str) -> String {
    format!("{property}_wtpct.csv")
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BasisSummary {
    pub property: String,
    pub rows_in: usize,
    pub rows_out: usize,
    pub held_uncertain: usize,
    pub conversion_errors: usize,
    pub resolved_by_dictionary: usize,
    pub input_mol: usize,
    pub input_mass: usize,
    #[serde(skip)]
    pub mol_path: PathBuf,
    #[serde(skip)]
    pub mass_path: PathBuf,
}

/// Streams one property dataset into its mol% and wt% mirrors. Uncertain
/// rows go to `audit`; rows that cannot be converted go to `errors`.
pub fn emit_dual_basis<A: Write, E: Write>(
    input: &Path,
    property: &str,
    dict: &CurationDictionary,
    table: &MolarMassTable,
    lexicon: &CompoundLexicon,
    out_dir: &Path,
    audit: &mut A,
    errors: &mut E,
) -> Result<BasisSummary> {
    let reader = DatasetReader::open(input, lexicon)?;
    let schema = reader.schema().clone();
    let out_schema = converted_schema(&schema);
    let mol_path = out_dir.join(molpct_name(property));
    let mass_path = out_dir.join(wtpct_name(property));
    let mut mol_w = DatasetWriter::create(&mol_path, &out_schema)?;
    let mut mass_w = DatasetWriter::create(&mass_path, &out_schema)?;
    let audit_path = out_dir.join("audit");
    let mut s = BasisSummary {
        property: property.to_string(),
        ..Default::default()
    };
    for r in reader {
        let r = r?;
        s.rows_in += 1;
        let pid = r.tag(&schema, PATENT_ID).unwrap_or_default();
        let unit = r.tag(&schema, UNIT).unwrap_or("none");
        let basis = match resolve_basis(unit, pid, dict) {
            Ok(b) => {
                if !matches!(unit.trim(), "mol" | "mass") {
                    s.resolved_by_dictionary += 1;
                }
                b
            }
            Err(label) => {
                writeln!(audit, "{}", audit_line(pid, label)).map_err(|e| Error::io(&audit_path, e))?;
                s.held_uncertain += 1;
                continue;
            }
        };
        match dual_basis(&schema, &r, basis, table) {
            Ok((mol, mass)) => {
                mol_w.write(&mol)?;
                mass_w.write(&mass)?;
                s.rows_out += 1;
                match basis {
                    Basis::Mol => s.input_mol += 1,
                    Basis::Mass => s.input_mass += 1,
                }
            }
            Err(e) => {
                writeln!(errors, "{pid}\t{e}").map_err(|e| Error::io(&audit_path, e))?;
                s.conversion_errors += 1;
            }
        }
    }
    mol_w.finish()?;
    mass_w.finish()?;
    s.mol_path = mol_path;
    s.mass_path = mass_path;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn builtin_table_covers_builtin_lexicon() {
        let t = MolarMassTable::builtin();
        t.ensure_covers(&CompoundLexicon::builtin()).unwrap();
        assert!((t.get("SiO2").unwrap() - 60.08).abs() < 0.01);
        assert!((t.get("Na2O").unwrap() - 61.98).abs() < 0.01);
    }

    #[test]
    fn table_validation() {
        assert!(MolarMassTable::parse("SiO2 0").is_err());
        assert!(MolarMassTable::parse("SiO2 -1").is_err());
        assert!(MolarMassTable::parse("SiO2 60\nSiO2 61").is_err());
        assert!(MolarMassTable::parse("SiO2").is_err());
        let t = MolarMassTable::parse("SiO2,60.08\n# c\nNa2O\t61.98 # trailing\n").unwrap();
        assert_eq!(t.len(), 2);
        let err = t.ensure_covers(&CompoundLexicon::builtin()).unwrap_err();
        match err {
            Error::MissingMolarMass(m) => assert!(m.contains(&"Al2O3".to_string())),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn worked_binary_example() {
        let t = MolarMassTable::builtin();
        let ox = names(&["SiO2", "Na2O"]);
        assert_eq!(mass_to_mol(&[49.22, 50.78], &ox, &t).unwrap(), vec![50.0, 50.0]);
        assert_eq!(mol_to_mass(&[50.0, 50.0], &ox, &t).unwrap(), vec![49.22, 50.78]);
    }

    #[test]
    fn single_oxide_is_fixed_point() {
        let t = MolarMassTable::builtin();
        let ox = names(&["SiO2"]);
        assert_eq!(mass_to_mol(&[100.0], &ox, &t).unwrap(), vec![100.0]);
        assert_eq!(mol_to_mass(&[100.0], &ox, &t).unwrap(), vec![100.0]);
    }

    #[test]
    fn equal_masses_leave_values_unchanged() {
        let t = MolarMassTable::parse("A 50\nB 50").unwrap();
        let ox = names(&["A", "B"]);
        assert_eq!(mass_to_mol(&[30.0, 70.0], &ox, &t).unwrap(), vec![30.0, 70.0]);
    }

    #[test]
    fn missing_mass_and_empty_rows_are_errors() {
        let t = MolarMassTable::parse("SiO2 60.08").unwrap();
        let ox = names(&["SiO2", "XyO"]);
        assert_eq!(
            mass_to_mol(&[50.0, 50.0], &ox, &t),
            Err(ConversionError::MissingMass(vec!["XyO".into()]))
        );
        assert_eq!(mass_to_mol(&[100.0, 0.0], &ox, &t).unwrap(), vec![100.0, 0.0]);
        assert_eq!(mass_to_mol(&[0.0, 0.0], &ox, &t), Err(ConversionError::Empty));
    }

    #[test]
    fn audit_line_format() {
        assert_eq!(
            audit_line("us11485676b2_b12", "none"),
            "https://patents.google.com/patent/US11485676B2/en → none"
        );
    }

    #[test]
    fn uncertain_units() {
        let d = CurationDictionary::from_json(r#"{"patent_basis_map": {"US1": "mol"}}"#).unwrap();
        let schema = Schema::new(names(&["SiO2"]), vec![], names(&[PATENT_ID, UNIT]));
        let rows = vec![
            Record { values: vec![100.0], tags: names(&["US1_b0", "both"]) },
            Record { values: vec![100.0], tags: names(&["US2_b0", "none"]) },
            Record { values: vec![100.0], tags: names(&["US2_b1", "mass"]) },
        ];
        let mut audit = Vec::new();
        let out = adjust_uncertain_units(&schema, rows, &d, &mut audit).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].tags[1], "mol");
        assert_eq!(out[1].tags[1], "mass");
        assert_eq!(
            String::from_utf8(audit).unwrap(),
            "https://patents.google.com/patent/US2/en → none\n"
        );
    }

    fn composition(max_k: usize) -> impl Strategy<Value = (Vec<String>, Vec<f64>)> {
        let pool: Vec<String> = CompoundLexicon::builtin().formulas().map(String::from).collect();
        prop::sample::subsequence(pool, 1..=max_k)
            .prop_flat_map(|ox| {
                let k = ox.len();
                (Just(ox), prop::collection::vec(0.01f64..100.0, k))
            })
            .prop_map(|(ox, raw)| {
                let total: f64 = raw.iter().sum();
                (ox, raw.iter().map(|v| v / total * 100.0).collect())
            })
    }

    proptest! {
        #[test]
        fn exact_conversions_are_inverse((ox, x) in composition(10)) {
            let t = MolarMassTable::builtin();
            let back = mass_to_mol_exact(&mol_to_mass_exact(&x, &ox, &t).unwrap(), &ox, &t).unwrap();
            for (a, b) in x.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }

        #[test]
        fn outputs_reclose((ox, x) in composition(20)) {
            let t = MolarMassTable::builtin();
            for y in [mol_to_mass(&x, &ox, &t).unwrap(), mass_to_mol(&x, &ox, &t).unwrap()] {
                let sum: f64 = y.iter().sum();
                prop_assert!((sum - 100.0).abs() <= 0.1 + 1e-9);
            }
        }

        #[test]
        fn zeros_stay_zero((ox, mut x) in composition(8), zero_at in 0usize..8) {
            let t = MolarMassTable::builtin();
            if x.len() > 1 {
                let i = zero_at % x.len();
                x[i] = 0.0;
                let exact = mol_to_mass_exact(&x, &ox, &t).unwrap();
                let rounded = mol_to_mass(&x, &ox, &t).unwrap();
                for j in 0..x.len() {
                    prop_assert_eq!(x[j] == 0.0, exact[j] == 0.0);
                    if x[j] == 0.0 {
                        prop_assert_eq!(rounded[j], 0.0);
                    }
                }
            }
        }

        #[test]
        fn scale_invariance((ox, x) in composition(10), scale in 0.01f64..100.0) {
            let t = MolarMassTable::builtin();
            let scaled: Vec<f64> = x.iter().map(|v| v * scale).collect();
            let a = mass_to_mol_exact(&x, &ox, &t).unwrap();
            let b = mass_to_mol_exact(&scaled, &ox, &t).unwrap();
            for (p, q) in a.iter().zip(&b) {
                prop_assert!((p - q).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn dual_basis_streaming() {
        let d = tempfile::tempdir().unwrap();
        let input = d.path().join("optics.csv");
        std::fs::write(
            &input,
            "SiO2,Na2O,nD,Abbe Number,patent_id,unit\n\
             50,50,1.5,60.1,US1_b0,mol\n\
             49.22,50.78,1.51,0,US2_b0,mass\n\
             50,50,1.52,0,US3_b0,none\n\
             50,50,1.53,0,US4_b0,both\n",
        )
        .unwrap();
        let dict = CurationDictionary::from_json(r#"{"patent_basis_map": {"US4": "mass"}}"#).unwrap();
        let mut audit = Vec::new();
        let mut errors = Vec::new();
        let s = emit_dual_basis(
            &input,
            "optics",
            &dict,
            &MolarMassTable::builtin(),
            &CompoundLexicon::builtin(),
            d.path(),
            &mut audit,
            &mut errors,
        )
        .unwrap();
        assert_eq!((s.rows_in, s.rows_out, s.held_uncertain, s.resolved_by_dictionary), (4, 3, 1, 1));
        let mol = std::fs::read_to_string(d.path().join("optics_molpct.csv")).unwrap();
        let wt = std::fs::read_to_string(d.path().join("optics_wtpct.csv")).unwrap();
        assert_eq!(
            mol,
            "SiO2,Na2O,nD,Abbe Number,patent_id\n50,50,1.5,60.1,US1_b0\n50,50,1.51,0,US2_b0\n50.78,49.22,1.53,0,US4_b0\n"
        );
        assert_eq!(
            wt,
            "SiO2,Na2O,nD,Abbe Number,patent_id\n49.22,50.78,1.5,60.1,US1_b0\n49.22,50.78,1.51,0,US2_b0\n50,50,1.53,0,US4_b0\n"
        );
        assert_eq!(String::from_utf8(audit).unwrap(), "https://patents.google.com/patent/US3/en → none\n");
    }
}
