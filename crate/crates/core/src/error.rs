//! Crate-wide error type.

use crate::partitions::PairingFamily;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two diagrams were combined with incompatible row counts.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An index tuple does not match the number of legs it is evaluated on.
    #[error("tuple of length {got} evaluated on {want} legs")]
    LengthMismatch { want: usize, got: usize },

    /// A 1-based leg or position index falls outside the diagram.
    #[error("leg index {0} out of range")]
    LegOutOfRange(usize),

    /// The crossing signature is only defined for partitions with all blocks
    /// of even size.
    #[error("partition has a block of odd size; the signature is undefined")]
    OddBlock,

    /// A dense matrix would exceed the configured entry budget.
    #[error("dense matrix would need {entries} entries, over the bound {bound}")]
    SizeBound { entries: u128, bound: u128 },

    /// The Gram matrix of a pairing family is not invertible at this
    /// dimension. Carries the exact rank so callers can report precisely how
    /// degenerate the fixed-vector system is.
    #[error(
        "gram matrix is singular for family {family}, k={k}, N={n}: rank {rank} of {order}"
    )]
    GramSingular {
        family: PairingFamily,
        k: usize,
        n: u32,
        rank: usize,
        order: usize,
    },

    /// A size parameter exceeded its configured bound.
    #[error("size {k} exceeds the configured bound {bound}")]
    KBound { k: usize, bound: usize },

    /// Invalid user input (index ranges, malformed generators, profiles...).
    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    /// A cache file exists but cannot be decoded; callers recompute and
    /// overwrite after logging a warning.
    #[error("cache format: {0}")]
    CacheFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
