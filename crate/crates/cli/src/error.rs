use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] ellsurf::Error),
}

impl CliError {
    /// 1 for failed checks, 2 for unusable input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Core(ellsurf::Error::Validation { .. }) => 1,
            CliError::Config(_) | CliError::Io { .. } | CliError::Core(_) => 2,
        }
    }
}
