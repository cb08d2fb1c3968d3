use thiserror::Error;

/// Errors raised anywhere in the sensing pipeline.
///
/// The variants map onto the three failure families the command-line front
/// end distinguishes by exit code: configuration, numeric and I/O.
#[derive(Debug, Error)]
pub enum SenseError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("rank-deficient spectrum: smallest usable eigenvalue {value:e} is not positive")]
    RankDeficient { value: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<SenseError>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },
}

/// Coarse failure family, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numeric,
    Io,
}

impl SenseError {
    pub fn config(msg: impl Into<String>) -> Self {
        SenseError::Config(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            SenseError::Config(_) | SenseError::Parse { .. } => ErrorClass::Config,
            SenseError::Io { .. } => ErrorClass::Io,
            SenseError::Trial { source, .. } => source.class(),
            SenseError::Dimension(_)
            | SenseError::NonFinite(_)
            | SenseError::Degenerate(_)
            | SenseError::RankDeficient { .. }
            | SenseError::Empty(_) => ErrorClass::Numeric,
        }
    }

    /// Process exit code: 2 for configuration, 3 for numeric, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Numeric => 3,
            ErrorClass::Io => 4,
        }
    }
}

pub type Result<T, E = SenseError> = std::result::Result<T, E>;
