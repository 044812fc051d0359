use std::path::PathBuf;

/// Exit code for a malformed command line, config or input file.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for a failure while running a well-formed request.
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("invalid state file: {0}")]
    StateFile(String),
    #[error("results file does not match schema: {0}")]
    SchemaMismatch(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qgrain::Error),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::ConfigInvalid(_) | HarnessError::StateFile(_) => EXIT_USAGE,
            HarnessError::Core(
                qgrain::Error::InvalidGrid(_)
                | qgrain::Error::BadQ(_)
                | qgrain::Error::IndexOutOfRange { .. }
                | qgrain::Error::TooLarge { .. }
                | qgrain::Error::BadSpec(_)
                | qgrain::Error::InvalidArgument(_),
            ) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
