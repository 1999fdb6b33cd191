//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("mesh validation failed: {0}")]
    MeshValidation(String),

    #[error("system has no free degrees of freedom")]
    EmptySystem,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("ill-conditioned basis: {0}")]
    IllConditionedBasis(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bound condition violated: {0}")]
    ConditionViolated(String),

    #[error("cluster {cluster}: spectral gap violated: {detail}")]
    ClusterGapViolated { cluster: usize, detail: String },

    #[error("cluster {cluster}: eigenvalue separation violated: {detail}")]
    SeparationViolated { cluster: usize, detail: String },

    #[error("cluster ordering violated: {0}")]
    Ordering(String),

    #[error("missing constant: {0}")]
    MissingConstant(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("level {level}{}: {source}", .cluster.map(|c| format!(", cluster {c}")).unwrap_or_default())]
    Pipeline {
        level: u32,
        cluster: Option<usize>,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach pipeline coordinates to an error bubbling out of a batch run.
    pub fn at(self, level: u32, cluster: Option<usize>) -> Error {
        Error::Pipeline {
            level,
            cluster,
            source: Box::new(self),
        }
    }
}
