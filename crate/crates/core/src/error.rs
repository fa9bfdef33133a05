use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("requested {requested} primes but the configured ceiling is {ceiling}")]
    ResourceExhausted { requested: u64, ceiling: u64 },

    #[error("index {index} is outside the table range 1..={count}")]
    IndexOutOfRange { index: u64, count: u64 },

    #[error("argument {value} exceeds the largest stored prime {largest}")]
    ArgumentOutOfRange { value: u64, largest: u64 },

    #[error("exact primorial requested at n = {index}, above the product cap {cap}")]
    ProductCapExceeded { index: u64, cap: u64 },

    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },

    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("unsorted input at position {position}")]
    UnsortedInput { position: usize },

    #[error("negative input at position {position}")]
    NegativeInput { position: usize },

    #[error("unknown inequality id `{id}`; valid ids: {valid}")]
    UnknownId { id: String, valid: String },

    #[error("table too small: {id} at n = {index} needs {needed} primes, table has {count}")]
    TableTooSmall {
        id: &'static str,
        index: u64,
        needed: u64,
        count: u64,
    },

    #[error("invalid range [{from}, {to}]: {detail}")]
    InvalidRange { from: u64, to: u64, detail: String },

    #[error("corrupt cache: {0}")]
    CorruptCache(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error("worker pool: {0}")]
    ThreadPool(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
