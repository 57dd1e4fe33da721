use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid subshift: {0}")]
    InvalidSft(String),

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u8, alphabet: usize },

    #[error("forbidden transition {from} -> {to} {context}")]
    ForbiddenTransition { from: u8, to: u8, context: String },

    #[error("coordinate {coord} outside sampled window [{lo}, {hi}]")]
    WindowExceeded { coord: i64, lo: i64, hi: i64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("transition graph is reducible; stationary vector is not unique")]
    Reducible,

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("zero measure: {0}")]
    ZeroMeasure(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what} is {got}, above the cap of {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("points agree on every coordinate in [-{depth}, {depth}]")]
    IdenticalPoints { depth: usize },

    #[error("no entry into the target set within {horizon} steps")]
    NoEntry { horizon: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
