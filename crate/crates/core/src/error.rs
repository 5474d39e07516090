use thiserror::Error;

/// Errors produced by construction, channel simulation, decoding and I/O.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {symbol} at position {position} is outside the alphabet of size {q}")]
    InvalidSymbol { symbol: u32, position: usize, q: u16 },

    #[error("alphabet mismatch: expected q={expected}, found q={found}")]
    AlphabetMismatch { expected: u16, found: u16 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("constructed code is empty")]
    EmptyCode,

    #[error("resource budget exceeded: {needed} > {budget} ({what})")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("no codeword of the class is consistent with the received word")]
    DecodeFailure,

    #[error("received word is consistent with more than one codeword of the class")]
    Ambiguous,

    #[error("channel contract violated at segment {segment}: {case}")]
    ContractViolation { segment: usize, case: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn violation(segment: usize, case: impl Into<String>) -> Self {
        Error::ContractViolation {
            segment,
            case: case.into(),
        }
    }
}
