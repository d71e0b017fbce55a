use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("symmetric function is not homogeneous (degrees {0:?})")]
    NonHomogeneous(Vec<u32>),

    #[error("size mismatch: |lambda| = {shape}, |mu| = {cycle_type}")]
    SizeMismatch { shape: u32, cycle_type: u32 },

    #[error("invariant pairing is not a non-negative integer ({context}): {value}")]
    NonIntegerDimension { context: String, value: String },

    #[error("fused and exact pairings disagree on {label}: exact {exact}, fused {fused}")]
    PairingMismatch { label: String, exact: String, fused: String },

    #[error("memoized e_{m}[h({k})] differs from a fresh recomputation")]
    CacheCoherence { k: u32, m: u32 },

    #[error("character value overflowed i128 at degree {0}")]
    CharacterOverflow(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing chi values for weights {0:?}")]
    MissingWeights(Vec<u32>),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
