use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One rejected CSV row, with its 1-based line number in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

fn join_rows(rows: &[RowError]) -> String {
    rows.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: unknown language (use --lang to override)", path.display())]
    UnknownLanguage { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: schema error: {}", path.display(), join_rows(rows))]
    Schema { path: PathBuf, rows: Vec<RowError> },

    #[error("{}: invalid values: {}", path.display(), join_rows(rows))]
    Value { path: PathBuf, rows: Vec<RowError> },

    #[error("{}: {message}", path.display())]
    Manifest { path: PathBuf, message: String },

    #[error("dataset {dataset}: measurement references unknown snippet `{snippet}`")]
    MissingSnippet { dataset: String, snippet: String },

    #[error("dataset {dataset}: variable `{variable}` missing for snippet `{snippet}`")]
    MissingVariable {
        dataset: String,
        snippet: String,
        variable: String,
    },

    #[error("dataset {dataset}: {reason}")]
    DegenerateDataset { dataset: String, reason: String },

    #[error("input vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {min} observations, got {n}")]
    TooFewObservations { n: usize, min: usize },

    #[error("sample size {n} outside supported range {min}..={max}")]
    OutOfRangeN { n: usize, min: usize, max: usize },

    #[error("input has zero variance")]
    ConstantInput,

    #[error("all pairs are tied")]
    AllTied,

    #[error("effect size needs n >= 4, got {n}")]
    NTooSmall { n: usize },

    #[error("cannot pool effects from different studies or variables ({0})")]
    MixedStudies(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
