use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),

    #[error("characteristic mismatch: {0} vs {1}")]
    Characteristic(u32, u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("modules live over different groups")]
    GroupMismatch,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("not an intertwiner: {0}")]
    NotIntertwining(String),

    #[error("not a short exact sequence: {0}")]
    NotExact(String),

    #[error("{0}")]
    Invalid(String),

    #[error("oracle infeasible: search space of {size} candidates exceeds bound {bound}")]
    OracleInfeasible { size: f64, bound: u64 },

    #[error("unknown catalog entry {name:?}; known entries: {}", known.join(", "))]
    UnknownExample { name: String, known: Vec<String> },

    #[error("{what}: {source}")]
    Json {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::Characteristic(..) => "characteristic_mismatch",
            Error::Dimension(_) => "dimension_mismatch",
            Error::GroupMismatch => "group_mismatch",
            Error::InvalidGroup(_) => "invalid_group",
            Error::InvalidModule(_) => "invalid_module",
            Error::NotIntertwining(_) => "not_intertwining",
            Error::NotExact(_) => "not_exact",
            Error::Invalid(_) => "invalid",
            Error::OracleInfeasible { .. } => "oracle_infeasible",
            Error::UnknownExample { .. } => "unknown_example",
            Error::Json { .. } => "parse_error",
            Error::Io { .. } => "io_error",
        }
    }
}
