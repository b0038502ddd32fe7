use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json error in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed url {url:?}: {reason}")]
    BadUrl { url: String, reason: String },

    #[error("unbalanced markup: {0}")]
    Markup(String),

    #[error("invalid patent id {0:?}")]
    BadPatentId(String),

    #[error("record for {url} has no publication number")]
    MissingPublicationNumber { url: String },

    #[error("no valid header in any of {0} input file(s)")]
    NoValidHeader(usize),

    #[error("failed writing row {row} from {path}: {source}")]
    RowWrite {
        path: PathBuf,
        row: usize,
        #[source]
        source: csv::Error,
    },

    #[error("molar-mass table is missing entries for: {}", .0.join(", "))]
    MissingMolarMass(Vec<String>),

    #[error("invalid data file {path}: {reason}")]
    DataFile { path: PathBuf, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing input {path} (produced by the `{producer}` stage)")]
    MissingInput { path: PathBuf, producer: &'static str },

    #[error("invalid curation dictionary: {0}")]
    Dictionary(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
