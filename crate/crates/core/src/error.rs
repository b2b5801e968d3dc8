use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol} at position {pos} is outside alphabet of size {alphabet_size}")]
    SymbolOutOfRange { pos: usize, symbol: u32, alphabet_size: u32 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("query of x at position {pos} is outside the sampled query set")]
    AccessViolation { pos: i64 },

    #[error("sample tree was built for different parameters: {0}")]
    TreeMismatch(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
