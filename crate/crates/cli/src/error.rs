use std::path::Path;

use socr_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid input: {0}")]
    Format(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    /// 1: a claim failed, 2: bad input, 3: numerical trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Format(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidInput(_)
                | Error::Asymmetric { .. }
                | Error::ZeroMatrix
                | Error::NotSingularIndefinite { .. }
                | Error::PreconditionViolated(_) => 2,
                Error::NotSocr(_)
                | Error::NotInSlice(_)
                | Error::EmptyInterval { .. }
                | Error::CertificateRejected(_) => 1,
                Error::NumericalFailure(_)
                | Error::SamplingExhausted { .. }
                | Error::IndefinitenessLost { .. }
                | Error::RankTooLarge(_) => 3,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Format(_) => "InvalidInput",
            CliError::Core(e) => match e {
                Error::InvalidInput(_) => "InvalidInput",
                Error::Asymmetric { .. } => "Asymmetric",
                Error::ZeroMatrix => "ZeroMatrix",
                Error::NumericalFailure(_) => "NumericalFailure",
                Error::SamplingExhausted { .. } => "SamplingExhausted",
                Error::NotSingularIndefinite { .. } => "NotSingularIndefinite",
                Error::PreconditionViolated(_) => "PreconditionViolated",
                Error::IndefinitenessLost { .. } => "IndefinitenessLost",
                Error::RankTooLarge(_) => "RankTooLarge",
                Error::NotSocr(_) => "NotSocr",
                Error::NotInSlice(_) => "NotInSlice",
                Error::EmptyInterval { .. } => "EmptyInterval",
                Error::CertificateRejected(_) => "CertificateRejected",
            },
        }
    }
}
