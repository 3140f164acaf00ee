use thiserror::Error;

use crate::index_repr::MAX_INDEX;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid number literal {literal:?}: {reason}")]
    Parse { literal: String, reason: &'static str },

    #[error("invalid index list: {0}")]
    InvalidIndexList(String),

    #[error("ilog2 is undefined for 0")]
    ZeroLogarithm,

    #[error("index overflow: {0} exceeds the largest representable index {MAX_INDEX}")]
    IndexOverflow(u128),

    #[error("fraction {0:?} is outside [0, 1)")]
    FractionOutOfRange(String),

    #[error("sensitivity must be at least 1")]
    ZeroSensitivity,

    #[error("transform length {requested} exceeds modulus capacity {capacity}")]
    NttCapacity { requested: usize, capacity: usize },

    #[error("max CPUs exceeded: {required} tasks required, {allowed} allowed")]
    MaxCpuExceeded { required: usize, allowed: usize },

    #[error("task ({row}, {column}) failed: {source}")]
    Worker {
        row: usize,
        column: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("worker panicked: {0}")]
    WorkerPanic(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid bench config: {0}")]
    BenchConfig(String),

    #[error("{algorithm} produced a wrong product at {bits} bits (seed {seed})")]
    Correctness {
        algorithm: String,
        bits: u64,
        seed: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
