use revolv_core::Error;

/// Failures of a CLI run, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot write output: {0}")]
    Io(String),

    #[error("numerical failure: {0}")]
    Numerical(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    /// Bad inputs surface as configuration errors, everything else as a
    /// numerical failure.
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::SupportViolation { .. }
            | Error::BranchCondition { .. }
            | Error::NotConcave { .. }
            | Error::OriginNotInterior => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}
