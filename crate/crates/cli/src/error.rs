use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] collar_core::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Core(collar_core::Error::NoConvergence { .. }) => 3,
            CliError::Usage(_) | CliError::Core(_) | CliError::Io(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(collar_core::Error::NoConvergence { .. }) => "no_convergence",
            CliError::Core(_) => "domain",
            CliError::Verification(_) => "verification",
            CliError::Io(_) => "io",
        }
    }
}
