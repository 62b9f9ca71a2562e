use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or missing input; exit status 1.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<qcompact_core::Error> for CliError {
    fn from(e: qcompact_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
