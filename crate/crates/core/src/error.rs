//! Error taxonomy shared by every fallible operation in the crate.
//!
//! The variants are deliberately coarse: callers (in particular the CLI)
//! dispatch on the *kind* of failure — mathematical negative, validation
//! problem, numerical trouble, or resolution limit — not on free-form text.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An iterative numerical routine failed to converge or produced a
    /// decomposition whose residual exceeds its acceptance threshold.
    #[error("numerical routine did not converge: {0}")]
    NonConvergence(String),

    /// Two objects that must live in the same algebra (or two vectors that
    /// must have equal length) do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation received an empty vector or a zero-dimensional algebra.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A matrix claimed to be Hermitian deviates from its adjoint by more
    /// than the ingestion tolerance allows.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds limit {limit:.3e}")]
    NotHermitian { defect: f64, limit: f64 },

    /// An input contained NaN or infinite entries.
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    /// A spectrum leaves the domain of a convex test function.
    #[error("eigenvalue {value:.6e} outside the domain of test function `{name}`")]
    DomainViolation { name: String, value: f64 },

    /// An operator expected to lie in the diagonal masa has significant
    /// off-diagonal mass.
    #[error("operator is not in the diagonal masa: off-diagonal mass {offdiag:.3e} exceeds {limit:.3e}")]
    NotInMasa { offdiag: f64, limit: f64 },

    /// A majorization precondition failed; carries the most negative margin.
    #[error("majorization precondition fails: worst margin {worst_margin:.6e}")]
    NotMajorized { worst_margin: f64 },

    /// An internal invariant that should hold mathematically was violated
    /// beyond numerical slack; indicates a genuine breakdown (or a bug).
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    /// A step function or flag operation was asked for a dyadic level that
    /// does not divide the available grid.
    #[error("grid mismatch: {cells} cells cannot be averaged at level {level}")]
    GridMismatch { cells: usize, level: u32 },

    /// No dyadic level can meet the requested accuracy at this matrix size.
    #[error("requested accuracy unreachable at this resolution; floor is {floor:.6e}")]
    LevelExhausted { floor: f64 },

    /// Malformed input data (JSON shape, flag values, etc.).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}
