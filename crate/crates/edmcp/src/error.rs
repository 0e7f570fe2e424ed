use edmcp_core::Error as CoreError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Limit(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn input_core(e: CoreError) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn construction(e: CoreError) -> Self {
        match e {
            CoreError::ResourceLimit(m) => CliError::Limit(m),
            e => CliError::Construction(e.to_string()),
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Limit(_) => 3,
            CliError::Construction(_) => 4,
        }
    }
}
