use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula (zero divisor,
    /// non-positive price, ...).
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// The formula is defined but its value overflowed to a non-finite float.
    #[error("range error: {0} is not finite")]
    Range(&'static str),

    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("column {col} sums to {sum}")]
    ColSumViolation { col: usize, sum: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("mapping is not a bijection")]
    NotAPermutation,
    #[error("no perfect matching on the positive support after {terms} terms")]
    MatchingFailure { terms: usize },
    #[error("admissibility violated: {0}")]
    AdmissibilityViolation(&'static str),
    #[error("operator values must be positive at bid stage (index {index} is {value})")]
    NonPositiveOperator { index: usize, value: f64 },

    #[error("invalid capacity: {0}")]
    InvalidCapacity(&'static str),
    #[error("events do not partition the ground set")]
    NotAPartition,

    #[error("block at row {row} has order {found}, pattern declares {expected}")]
    OrderMismatch { row: usize, expected: usize, found: usize },
    #[error("no block supplied for pattern row {row}")]
    MissingBlock { row: usize },
    #[error("block supplied at ({row}, {col}) which is outside the pattern")]
    UnexpectedBlock { row: usize, col: usize },
    #[error("split of index {index} sums to {found}, parent value is {expected}")]
    SplitNotConserved { index: usize, expected: f64, found: f64 },
    #[error("empty selection")]
    EmptySelection,
    #[error("empty candidate set")]
    EmptyCandidateSet,

    #[error("outcome sums vary along m ({first} vs {found}); the out-of-equilibrium equation assumes a constant sum")]
    OutcomeSumNotConserved { first: f64, found: f64 },
    #[error("solution vanishes at m = {m}; the logarithmic derivative has a pole")]
    Pole { m: f64 },
    #[error("amplitude form does not match the {0} regime")]
    AmplitudeForm(&'static str),

    #[error("gamma {0} is below the monotonicity floor")]
    GammaBelowFloor(f64),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("gamma = 1 makes every point a fixed point")]
    DegenerateGamma,
    #[error("gamma {0} has no fixed point inside (0, 1)")]
    NoInteriorFixedPoint(f64),
    #[error("no bias-cancelling constraint for a custom regime")]
    CustomRegime,
}
