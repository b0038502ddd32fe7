use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Traceability key of one extracted table block: the patent publication
/// number plus the block's position within the patent.
///
/// The canonical rendering is `<publication_number>_block_<k>` in lowercase
/// (used for block file names). Table cells carry the compact tag
/// `<publication_number>_b<k>`. Both forms parse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatentId {
    publication_number: String,
    block_index: usize,
}

impl PatentId {
    pub fn new(publication_number: &str, block_index: usize) -> Self {
        Self {
            publication_number: publication_number.trim().to_ascii_uppercase(),
            block_index,
        }
    }

    pub fn publication_number(&self) -> &str {
        &self.publication_number
    }

    pub fn block_index(&self) -> usize {
        self.block_index
    }

    /// `<publication_number>_block_<k>`, lowercase.
    pub fn render(&self) -> String {
        format!(
            "{}_block_{}",
            self.publication_number.to_ascii_lowercase(),
            self.block_index
        )
    }

    /// `<publication_number>_b<k>`, lowercase.
    pub fn tag(&self) -> String {
        format!(
            "{}_b{}",
            self.publication_number.to_ascii_lowercase(),
            self.block_index
        )
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::BadPatentId(s.to_string());
        let (prefix, index) = match s.rfind("_block_") {
            Some(i) => (&s[..i], &s[i + "_block_".len()..]),
            None => {
                let i = s.rfind("_b").ok_or_else(bad)?;
                (&s[..i], &s[i + 2..])
            }
        };
        if prefix.is_empty() || index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let block_index = index.parse().map_err(|_| bad())?;
        Ok(Self::new(prefix, block_index))
    }

    /// Publication number of a patent id cell, or of a bare publication number.
    pub fn publication_of(cell: &str) -> String {
        match Self::parse(cell) {
            Ok(id) => id.publication_number,
            Err(_) => cell.trim().to_ascii_uppercase(),
        }
    }
}

impl fmt::Display for PatentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for PatentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
