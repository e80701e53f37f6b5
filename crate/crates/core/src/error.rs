use thiserror::Error;

/// Errors raised by tensor, graph, structure, and solver operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: tensor is {m}x{n} but vectors have lengths {x_len}/{y_len}")]
    DimensionMismatch {
        m: usize,
        n: usize,
        x_len: usize,
        y_len: usize,
    },

    #[error("entry buffer has length {got}, expected {expected} for a {m}x{n} biquadratic tensor")]
    EntryCount {
        m: usize,
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("tensor entries must be finite; entry ({i1},{j1},{i2},{j2}) is {value}")]
    NonFiniteEntry {
        i1: usize,
        j1: usize,
        i2: usize,
        j2: usize,
        value: f64,
    },

    #[error("mode sizes must be at least {required}, got {m}x{n}")]
    ModeTooSmall { m: usize, n: usize, required: usize },

    #[error("operation requires a nonnegative tensor; entry ({i1},{j1},{i2},{j2}) = {value}")]
    NegativeEntry {
        i1: usize,
        j1: usize,
        i2: usize,
        j2: usize,
        value: f64,
    },

    #[error("{which} vector must be nonnegative; coordinate {index} = {value}")]
    NegativeCoordinate {
        which: &'static str,
        index: usize,
        value: f64,
    },

    #[error("{which} vector has no coordinate above the support threshold")]
    ZeroVector { which: &'static str },

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("candidate does not satisfy the M-eigenpair equations: residual {residual:e} exceeds tolerance {tol:e}")]
    NotAnEigenpair { residual: f64, tol: f64 },

    #[error("exhaustive enumeration supports m,n <= 3 (got {m}x{n}); use solve_lambda_max for larger tensors")]
    SizeTooLargeForOracle { m: usize, n: usize },

    #[error("edge endpoints within a side must be distinct: got {{{a},{a}}}")]
    DegenerateEdge { a: usize },

    #[error("vertex index {index} out of range for side of size {size}")]
    VertexOutOfRange { index: usize, size: usize },

    #[error("edge weight must be nonnegative and finite, got {0}")]
    BadWeight(f64),

    #[error("duplicate edge ({{{i1},{i2}}},{{{j1},{j2}}})")]
    DuplicateEdge {
        i1: usize,
        i2: usize,
        j1: usize,
        j2: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
