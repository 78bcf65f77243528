use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{algebra} level {level} outside supported range 1..={max}")]
    LevelOutOfRange {
        algebra: &'static str,
        level: u32,
        max: u32,
    },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid fusion ring: {0}")]
    InvalidRing(String),

    #[error("central charge undefined: |z| = {0:e}")]
    CentralChargeUndefined(f64),

    #[error("modular data invariant `{invariant}` violated: deviation {deviation:e}")]
    ModularInvariant {
        invariant: &'static str,
        deviation: f64,
    },

    #[error("invalid inclusion spec, field `{field}`: {message}")]
    InvalidSpec { field: String, message: String },

    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("graph is not a module over the fusion ring at this level: {0}")]
    NotAModule(String),

    #[error("ambichiral action: {0}")]
    AmbichiralAction(String),

    #[error("inconsistent Gram matrix: {0}")]
    InconsistentGram(String),

    #[error("ambiguous factorization: {0}")]
    AmbiguousFactorization(String),

    #[error("global index certificate failed: {0}")]
    Certificate(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("split edge distribution: {0}")]
    SplitDistribution(String),

    #[error("dot line {line}: {message}")]
    DotParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Component the error originates from, for qualified messages.
    pub fn module(&self) -> &'static str {
        match self {
            Error::LevelOutOfRange { .. } | Error::UnknownLabel(_) | Error::InvalidRing(_) => "fusion_core",
            Error::CentralChargeUndefined(_) | Error::ModularInvariant { .. } => "modular_data",
            Error::InvalidSpec { .. } | Error::Parse { .. } | Error::Io { .. } => "inclusion_data",
            Error::NotAModule(_) | Error::AmbichiralAction(_) => "inclusion_data",
            Error::InconsistentGram(_)
            | Error::AmbiguousFactorization(_)
            | Error::Certificate(_)
            | Error::Precondition(_) => "double_engine",
            Error::SplitDistribution(_) | Error::DotParse { .. } => "graph_emit",
        }
    }

    /// Whether the error stems from unreadable or malformed input rather
    /// than a failed mathematical invariant.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Io { .. }
                | Error::InvalidSpec { .. }
                | Error::UnknownLabel(_)
                | Error::LevelOutOfRange { .. }
                | Error::DotParse { .. }
        )
    }

    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            message: message.into(),
        }
    }
}
