use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] lapoly::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    /// 2 bad input, 3 singular operator, 4 internal size guard, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Read { .. } => 2,
            CliError::Solver(e) => match e {
                lapoly::Error::SingularOperator { .. } | lapoly::Error::SingularMatrix { .. } => 3,
                lapoly::Error::OracleSizeExceeded { .. } => 4,
                _ => 2,
            },
            CliError::Write(_) | CliError::VerifyFailed => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
