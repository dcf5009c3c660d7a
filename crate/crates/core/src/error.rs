use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {index}: coordinate {value} on axis {axis} is outside [0, {extent})")]
    DomainViolation {
        index: usize,
        axis: usize,
        value: u64,
        extent: u64,
    },

    #[error("line {line}: value {value} is outside [0, {extent})")]
    LineDomainViolation { line: usize, value: u64, extent: u64 },

    #[error("code {code} does not fit in {bits} bits")]
    CodeOutOfRange { code: u128, bits: u32 },

    #[error("{curve} curve does not support dimension {dims}")]
    UnsupportedDimension { curve: &'static str, dims: usize },

    #[error("invalid domain: omega={omega}, d={dims} ({reason})")]
    InvalidDomain {
        omega: u32,
        dims: usize,
        reason: &'static str,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
