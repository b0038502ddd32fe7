use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tabular::normalize_text;

const DEFAULT_LEXICON: &str = include_str!("../../data/oxides.txt");

/// Canonical oxide formulas plus the surface forms that resolve to them.
#[derive(Debug, Clone)]
pub struct CompoundLexicon {
    canonical: Vec<String>,
    aliases: HashMap<String, usize>,
    /// Longest alias first, for scanning free text.
    scan_order: Vec<(String, usize)>,
}

impl CompoundLexicon {
    /// The shipped oxide list.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("shipped lexicon is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|reason| Error::DataFile {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// One canonical formula per line; optional alias forms follow on the same
    /// line separated by tabs or commas. `#` starts a comment.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut canonical = Vec::new();
        let mut aliases = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line
                .split(['\t', ','])
                .map(str::trim)
                .filter(|f| !f.is_empty());
            let formula = fields.next().expect("non-empty line has a field");
            let idx = canonical.len();
            canonical.push(formula.to_string());
            for form in std::iter::once(formula).chain(fields) {
                let key = alias_key(form);
                if let Some(prev) = aliases.insert(key.clone(), idx) {
                    if prev != idx {
                        return Err(format!(
                            "line {}: surface form {form:?} already maps to {}",
                            lineno + 1,
                            canonical[prev]
                        ));
                    }
                }
            }
        }
        if canonical.is_empty() {
            return Err("lexicon is empty".into());
        }
        let mut scan_order: Vec<(String, usize)> =
            aliases.iter().map(|(k, v)| (k.clone(), *v)).collect();
        scan_order.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        Ok(Self {
            canonical,
            aliases,
            scan_order,
        })
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &str> {
        self.canonical.iter().map(String::as_str)
    }

    pub fn contains(&self, formula: &str) -> bool {
        self.canonical.iter().any(|c| c == formula)
    }

    /// Resolves a surface form (exactly, after folding) to its canonical formula.
    pub fn canonical_of(&self, surface: &str) -> Option<&str> {
        self.aliases
            .get(&alias_key(surface))
            .map(|&i| self.canonical[i].as_str())
    }

    /// Resolves a column label to an oxide. Bracketed annotations and basis
    /// markers such as `(mol%)` or `wt%` are ignored, so `SiO2 (mol%)` resolves
    /// to `SiO2` while `SiO2+B2O3` does not resolve at all.
    pub fn match_label(&self, label: &str) -> Option<&str> {
        let folded = normalize_text(label);
        let stripped = strip_annotations(&folded);
        if stripped.is_empty() {
            return None;
        }
        self.canonical_of(&stripped)
    }

    /// All compound mentions in free text, in order of appearance. A mention
    /// must not be glued to other letters or digits on either side.
    pub fn find_compounds(&self, text: &str) -> Vec<&str> {
        let folded = normalize_text(text);
        let bytes = folded.as_bytes();
        let mut found = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            if pos > 0 && is_word_byte(bytes[pos - 1]) {
                pos += 1;
                continue;
            }
            let rest = &folded[pos..];
            let hit = self.scan_order.iter().find(|(alias, _)| {
                rest.starts_with(alias.as_str())
                    && rest[alias.len()..]
                        .bytes()
                        .next()
                        .map_or(true, |b| !is_word_byte(b))
            });
            match hit {
                Some((alias, idx)) => {
                    found.push(self.canonical[*idx].as_str());
                    pos += alias.len();
                }
                None => {
                    pos += rest.chars().next().map_or(1, char::len_utf8);
                }
            }
        }
        found
    }

    /// Number of distinct compounds mentioned in `text`.
    pub fn count_distinct(&self, text: &str) -> usize {
        let mut seen: Vec<&str> = self.find_compounds(text);
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b >= 0x80
}

fn alias_key(form: &str) -> String {
    normalize_text(form).replace(' ', "")
}

fn strip_annotations(folded: &str) -> String {
    let mut out = String::with_capacity(folded.len());
    let mut depth = 0usize;
    for c in folded.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    let mut key = out.replace(' ', "");
    for marker in [
        "mol%", "mole%", "wt%", "wt.%", "mass%", "weight%", "at%", "%", "mol", "wt.", "wt",
    ] {
        if let Some(stripped) = key.strip_suffix(marker) {
            key = stripped.to_string();
            break;
        }
    }
    key.trim_end_matches([':', '.', '-', '/']).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_lexicon_covers_named_oxides() {
        let lex = CompoundLexicon::builtin();
        assert!(lex.len() >= 70, "only {} entries", lex.len());
        for ox in [
            "SiO2", "Al2O3", "Na2O", "B2O3", "P2O5", "ZrO2", "CaO", "K2O", "MgO", "BaO", "SrO",
            "CuO", "TiO2", "Fe2O3", "SnO2", "Y2O3", "Nb2O5", "Ta2O5", "La2O3", "WO3", "Bi2O3",
        ] {
            assert!(lex.contains(ox), "{ox} missing");
        }
    }

    #[test]
    fn alias_map_is_total_over_canonical_set() {
        let lex = CompoundLexicon::builtin();
        for f in lex.formulas() {
            assert_eq!(lex.canonical_of(f), Some(f));
        }
    }

    #[test]
    fn label_matching() {
        let lex = CompoundLexicon::builtin();
        assert_eq!(lex.match_label("SiO₂"), Some("SiO2"));
        assert_eq!(lex.match_label("sio2 (mol%)"), Some("SiO2"));
        assert_eq!(lex.match_label("Al2O3 wt%"), Some("Al2O3"));
        assert_eq!(lex.match_label("Nb 2 O 5"), Some("Nb2O5"));
        assert_eq!(lex.match_label("SiO2+B2O3"), None);
        assert_eq!(lex.match_label("nd"), None);
        assert_eq!(lex.match_label(""), None);
    }

    #[test]
    fn compound_scan_respects_boundaries() {
        let lex = CompoundLexicon::builtin();
        assert_eq!(
            lex.find_compounds("SiO2+B2O3+Al2O3"),
            vec!["SiO2", "B2O3", "Al2O3"]
        );
        assert_eq!(lex.find_compounds("Na2O + K2O (R2O)"), vec!["Na2O", "K2O"]);
        assert!(lex.find_compounds("CaO2x").is_empty());
        assert!(lex.find_compounds("no oxides here").is_empty());
        assert_eq!(lex.find_compounds("SnO2"), vec!["SnO2"]);
        assert_eq!(lex.count_distinct("SiO₂ and SiO2 and MgO"), 2);
    }

    #[test]
    fn custom_aliases() {
        let lex = CompoundLexicon::parse("SiO2\tsilica\nNa2O, soda\n").unwrap();
        assert_eq!(lex.canonical_of("Silica"), Some("SiO2"));
        assert_eq!(lex.match_label("soda (wt%)"), Some("Na2O"));
        assert!(CompoundLexicon::parse("SiO2\nSiO2x\tsio2\n").is_err());
        assert!(CompoundLexicon::parse("# nothing\n").is_err());
    }
}
