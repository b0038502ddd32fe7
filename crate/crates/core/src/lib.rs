//! Extraction, cleaning and comparison of oxide-glass composition/property
//! tables mined from patent pages.
//!
//! The stages follow the data: [`ingest`] turns patent pages into JSON records,
//! [`tabular`] turns their table sections into per-block CSVs, [`consolidate`]
//! merges them, [`filter`] keeps closed compositions with properties,
//! [`optics`] and [`liquidus`] standardize the target properties, [`basis`]
//! produces mol% and wt% versions, and [`compare`] computes statistics
//! against reference databases. [`pipeline`] wires the stages together.

pub mod basis;
pub mod compare;
pub mod consolidate;
pub mod csvio;
pub mod dataset;
pub mod dictionary;
mod error;
pub mod filter;
pub mod ingest;
pub mod liquidus;
pub mod optics;
pub mod parts;
pub mod pipeline;
pub mod tabular;

pub use error::{Error, Result};

/// Column holding the block tag of each row.
pub const PATENT_ID: &str = "patent_id";
/// Column holding the composition basis label.
pub const UNIT: &str = "unit";
