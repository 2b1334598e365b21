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

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vertex id {id} out of range for n = {n}")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("template has {k} vertices, at most {max} supported")]
    TemplateTooLarge { k: usize, max: usize },

    #[error("invalid color set: {0}")]
    ColorSet(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("count tables need {required} bytes, budget is {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },

    #[error("instance exceeds oracle limits ({0}); pass force to run anyway")]
    OracleLimit(String),

    #[error("cannot fit model: {0}")]
    Fit(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error is a resource refusal (memory budget, oracle limits)
    /// rather than bad input.
    pub fn is_resource_refusal(&self) -> bool {
        matches!(self, Error::MemoryBudget { .. } | Error::OracleLimit(_))
    }
}
