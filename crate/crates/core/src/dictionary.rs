//! Curation dictionary: label → standardized column, blacklist, and the
//! per-patent maps that resolve generic columns and uncertain bases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::PatentId;
use crate::tabular::normalize_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WavelengthTarget {
    #[serde(rename = "nD")]
    ND,
    #[serde(rename = "nG")]
    NG,
    #[serde(rename = "nF")]
    NF,
    #[serde(rename = "nH")]
    NH,
    #[serde(rename = "nC")]
    NC,
}

impl WavelengthTarget {
    pub const ALL: [WavelengthTarget; 5] = [Self::ND, Self::NG, Self::NF, Self::NH, Self::NC];

    pub fn column(self) -> &'static str {
        match self {
            Self::ND => "nD",
            Self::NG => "nG",
            Self::NF => "nF",
            Self::NH => "nH",
            Self::NC => "nC",
        }
    }

    pub fn wavelength_nm(self) -> f64 {
        match self {
            Self::ND => 589.3,
            Self::NG => 435.8,
            Self::NF => 486.13,
            Self::NH => 404.7,
            Self::NC => 656.3,
        }
    }

    pub fn from_column(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.column() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TempUnit {
    Celsius,
    Fahrenheit,
    Kelvin,
}

impl TempUnit {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Celsius => "°C",
            Self::Fahrenheit => "°F",
            Self::Kelvin => "K",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Internal,
    Air,
    Platinum,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Internal => "Internal",
            Self::Air => "Air",
            Self::Platinum => "Platinum",
        }
    }
}

/// A standardized liquidus column such as `Tliq Air(°C)` or `Tliq(K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TliqTarget {
    pub unit: TempUnit,
    pub condition: Option<Condition>,
}

impl TliqTarget {
    pub const fn new(unit: TempUnit, condition: Option<Condition>) -> Self {
        Self { unit, condition }
    }
}

impl fmt::Display for TliqTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition {
            Some(c) => write!(f, "Tliq {}({})", c.as_str(), self.unit.symbol()),
            None => write!(f, "Tliq({})", self.unit.symbol()),
        }
    }
}

fn tliq_target_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^(?i)tliq(?:\s+(internal|air|platinum))?\s*\((°c|°f|k)\)$").expect("static regex")
    })
}

impl FromStr for TliqTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let caps = tliq_target_regex()
            .captures(s.trim())
            .ok_or_else(|| Error::Dictionary(format!("unknown liquidus target {s:?}")))?;
        let condition = caps.get(1).map(|m| match m.as_str().to_ascii_lowercase().as_str() {
            "internal" => Condition::Internal,
            "air" => Condition::Air,
            _ => Condition::Platinum,
        });
        let unit = match caps[2].to_lowercase().as_str() {
            "°c" => TempUnit::Celsius,
            "°f" => TempUnit::Fahrenheit,
            _ => TempUnit::Kelvin,
        };
        Ok(Self { unit, condition })
    }
}

pub const ABBE_COLUMN: &str = "Abbe Number";

/// Where a label's values belong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Wavelength(WavelengthTarget),
    Abbe,
    Tliq(TliqTarget),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Wavelength(w) => f.write_str(w.column()),
            Target::Abbe => f.write_str(ABBE_COLUMN),
            Target::Tliq(t) => t.fmt(f),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(w) = WavelengthTarget::from_column(s) {
            Ok(Target::Wavelength(w))
        } else if s == ABBE_COLUMN {
            Ok(Target::Abbe)
        } else {
            s.parse().map(Target::Tliq)
        }
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(TliqTarget);
string_serde!(Target);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Mol,
    Mass,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Mol => "mol",
            Basis::Mass => "mass",
        }
    }
}

/// Class of a candidate property column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnClass {
    /// Declares its wavelength or unit, directly or through `label_map`.
    ExplicitUnit(Target),
    Generic,
    FalsePositive,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurationDictionary {
    /// Normalized label → standardized column.
    pub label_map: BTreeMap<String, Target>,
    /// Normalized labels of columns that are not the property they look like.
    pub blacklist: BTreeSet<String>,
    /// Publication number → wavelength of that patent's generic `n` columns.
    pub patent_wavelength_map: BTreeMap<String, WavelengthTarget>,
    /// Publication number → unit and condition of its generic liquidus columns.
    pub patent_unit_map: BTreeMap<String, TliqTarget>,
    /// Publication number → composition basis.
    pub patent_basis_map: BTreeMap<String, Basis>,
}

impl CurationDictionary {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Parses and normalizes: labels are folded, publication numbers
    /// uppercased. Fails if a label is both mapped and blacklisted.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CurationDictionary =
            serde_json::from_str(text).map_err(|e| Error::Dictionary(e.to_string()))?;
        let dict = CurationDictionary {
            label_map: fold_keys(raw.label_map, |k| normalize_text(k))?,
            blacklist: raw.blacklist.iter().map(|l| normalize_text(l)).collect(),
            patent_wavelength_map: fold_keys(raw.patent_wavelength_map, upper)?,
            patent_unit_map: fold_keys(raw.patent_unit_map, upper)?,
            patent_basis_map: fold_keys(raw.patent_basis_map, upper)?,
        };
        dict.validate()?;
        Ok(dict)
    }

    pub fn validate(&self) -> Result<()> {
        let both: Vec<&str> = self
            .blacklist
            .iter()
            .filter(|l| self.label_map.contains_key(*l))
            .map(String::as_str)
            .collect();
        if !both.is_empty() {
            return Err(Error::Dictionary(format!(
                "labels both mapped and blacklisted: {}",
                both.join(", ")
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dictionary serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn is_blacklisted(&self, label: &str) -> bool {
        self.blacklist.contains(&normalize_text(label))
    }

    pub fn mapped(&self, label: &str) -> Option<Target> {
        self.label_map.get(&normalize_text(label)).copied()
    }

    /// Three-way classification given a fallback that reads a target off the
    /// label itself.
    pub fn classify(&self, label: &str, self_declared: impl Fn(&str) -> Option<Target>) -> ColumnClass {
        if self.is_blacklisted(label) {
            ColumnClass::FalsePositive
        } else if let Some(t) = self.mapped(label).or_else(|| self_declared(&normalize_text(label))) {
            ColumnClass::ExplicitUnit(t)
        } else {
            ColumnClass::Generic
        }
    }

    pub fn wavelength_of(&self, patent_id: &str) -> Option<WavelengthTarget> {
        self.patent_wavelength_map
            .get(&PatentId::publication_of(patent_id))
            .copied()
    }

    pub fn tliq_unit_of(&self, patent_id: &str) -> Option<TliqTarget> {
        self.patent_unit_map
            .get(&PatentId::publication_of(patent_id))
            .copied()
    }

    pub fn basis_of(&self, patent_id: &str) -> Option<Basis> {
        self.patent_basis_map
            .get(&PatentId::publication_of(patent_id))
            .copied()
    }
}

fn upper(s: &str) -> String {
    s.trim().to_ascii_uppercase()
}

fn fold_keys<V: PartialEq>(map: BTreeMap<String, V>, f: impl Fn(&str) -> String) -> Result<BTreeMap<String, V>> {
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let key = f(&k);
        if let Some(prev) = out.get(&key) {
            if *prev != v {
                return Err(Error::Dictionary(format!("conflicting entries for {key:?}")));
            }
        }
        out.insert(key, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE: &str = r#"{
        "label_map": {
            "Refractive index (587.6 nm ≈ d-line)": "nD",
            "νd": "Abbe Number",
            "Tliquidus °C": "Tliq(°C)",
            "liquidus (platinum) °C": "Tliq Platinum(°C)"
        },
        "blacklist": ["Density"],
        "patent_wavelength_map": {"us11485676b2": "nD"},
        "patent_unit_map": {"US10106455B2": "Tliq(°C)"},
        "patent_basis_map": {"US1": "mol", "US2": "mass"}
    }"#;

    #[test]
    fn loads_and_normalizes() {
        let d = CurationDictionary::from_json(SAMPLE).unwrap();
        assert_eq!(
            d.mapped("refractive index (587.6 nm ≈ d-line)"),
            Some(Target::Wavelength(WavelengthTarget::ND))
        );
        assert!(d.is_blacklisted("density"));
        assert_eq!(d.wavelength_of("us11485676b2_b12"), Some(WavelengthTarget::ND));
        assert_eq!(
            d.mapped("liquidus (platinum) °c"),
            Some(Target::Tliq(TliqTarget::new(TempUnit::Celsius, Some(Condition::Platinum))))
        );
        assert_eq!(d.basis_of("US2_block_0"), Some(Basis::Mass));
    }

    #[test]
    fn dump_then_load_is_lossless() {
        let d = CurationDictionary::from_json(SAMPLE).unwrap();
        let text = d.to_json();
        let again = CurationDictionary::from_json(&text).unwrap();
        assert_eq!(d, again);
        assert_eq!(text, again.to_json());
    }

    #[test]
    fn mapped_and_blacklisted_is_rejected() {
        let bad = r#"{"label_map": {"Density": "nD"}, "blacklist": ["density"]}"#;
        assert!(matches!(CurationDictionary::from_json(bad), Err(Error::Dictionary(_))));
        let unknown = r#"{"label_map": {"x": "nZ"}}"#;
        assert!(CurationDictionary::from_json(unknown).is_err());
        let extra = r#"{"colour_map": {}}"#;
        assert!(CurationDictionary::from_json(extra).is_err());
    }

    #[test]
    fn target_strings_round_trip() {
        for s in [
            "nD", "nG", "nF", "nH", "nC", "Abbe Number", "Tliq(°C)", "Tliq Air(°C)",
            "Tliq Platinum(°C)", "Tliq(°F)", "Tliq(K)", "Tliq Internal(°C)",
        ] {
            let t: Target = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
    }

    #[test]
    fn classification_is_a_partition() {
        let d = CurationDictionary::from_json(SAMPLE).unwrap();
        let declared = |l: &str| (l == "nd").then_some(Target::Wavelength(WavelengthTarget::ND));
        assert_eq!(d.classify("Density", declared), ColumnClass::FalsePositive);
        assert_eq!(d.classify("nd", declared), ColumnClass::ExplicitUnit(Target::Wavelength(WavelengthTarget::ND)));
        assert_eq!(d.classify("νd", declared), ColumnClass::ExplicitUnit(Target::Abbe));
        assert_eq!(d.classify("n", declared), ColumnClass::Generic);
    }

    fn arb_target() -> impl Strategy<Value = Target> {
        prop_oneof![
            prop::sample::select(WavelengthTarget::ALL.to_vec()).prop_map(Target::Wavelength),
            Just(Target::Abbe),
            (
                prop::sample::select(vec![TempUnit::Celsius, TempUnit::Fahrenheit, TempUnit::Kelvin]),
                prop::option::of(prop::sample::select(vec![Condition::Internal, Condition::Air, Condition::Platinum])),
            )
                .prop_map(|(u, c)| Target::Tliq(TliqTarget::new(u, c))),
        ]
    }

    proptest! {
        #[test]
        fn arbitrary_dictionaries_round_trip(
            labels in prop::collection::btree_map("[a-z][a-z0-9 ()%.]{0,12}", arb_target(), 0..6),
            black in prop::collection::btree_set("[a-z][a-z0-9 ]{0,12}", 0..4),
            waves in prop::collection::btree_map("US[0-9]{4,8}B[12]", prop::sample::select(WavelengthTarget::ALL.to_vec()), 0..4),
            bases in prop::collection::btree_map("US[0-9]{4,8}A1", prop::sample::select(vec![Basis::Mol, Basis::Mass]), 0..4),
        ) {
            let label_map: BTreeMap<String, Target> = labels.into_iter().map(|(k, v)| (normalize_text(&k), v)).collect();
            let blacklist: BTreeSet<String> = black
                .into_iter()
                .map(|l| normalize_text(&l))
                .filter(|l| !label_map.contains_key(l))
                .collect();
            let d = CurationDictionary {
                label_map,
                blacklist,
                patent_wavelength_map: waves,
                patent_unit_map: BTreeMap::new(),
                patent_basis_map: bases,
            };
            let back = CurationDictionary::from_json(&d.to_json()).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
