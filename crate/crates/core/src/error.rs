//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by construction, validation, parsing, and the
/// iterative solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A block shape was empty or contained a zero dimension.
    #[error("block shape must list at least one positive dimension")]
    InvalidShape,

    /// The number of supplied blocks does not match the shape.
    #[error("expected {expected} blocks, got {got}")]
    BlockCountMismatch {
        /// Blocks demanded by the shape.
        expected: usize,
        /// Blocks actually supplied.
        got: usize,
    },

    /// A block's dimensions disagree with the shape entry.
    #[error("block {index} is {rows}x{cols}, expected {dim}x{dim}")]
    BlockDimMismatch {
        /// Index of the offending block.
        index: usize,
        /// Rows found.
        rows: usize,
        /// Columns found.
        cols: usize,
        /// Dimension demanded by the shape.
        dim: usize,
    },

    /// A block deviates from its conjugate transpose beyond tolerance.
    #[error(
        "block {index} is not hermitian: entrywise deviation {deviation:.3e} exceeds {tol:.3e}"
    )]
    NotHermitian {
        /// Index of the offending block.
        index: usize,
        /// Largest entrywise |B - B*| found.
        deviation: f64,
        /// Allowed deviation.
        tol: f64,
    },

    /// Two operands live on different block shapes.
    #[error("operands have mismatched block shapes")]
    ShapeMismatch,

    /// A state's total trace is not 1 within tolerance.
    #[error("trace {trace:.17} differs from 1 beyond {tol:.3e}")]
    TraceNotOne {
        /// Trace found.
        trace: f64,
        /// Allowed deviation.
        tol: f64,
    },

    /// A state has an eigenvalue below the faithfulness floor.
    #[error("eigenvalue {eigenvalue:.3e} lies below the faithfulness floor {floor:.3e}")]
    NotFaithful {
        /// Smallest eigenvalue found.
        eigenvalue: f64,
        /// Required floor.
        floor: f64,
    },

    /// A functional that must be positive has a negative eigenvalue.
    #[error("matrix has a negative eigenvalue {eigenvalue:.3e}")]
    NotPositive {
        /// Offending eigenvalue.
        eigenvalue: f64,
    },

    /// A functional that must be traceless carries net trace.
    #[error("functional has total trace {trace:.3e}, expected 0 within {tol:.3e}")]
    NotTraceless {
        /// Trace found.
        trace: f64,
        /// Allowed deviation.
        tol: f64,
    },

    /// An observable that must be centered for the reference state is not.
    #[error("observable is not centered: |phi(h)| = {value:.3e} exceeds {tol:.3e}")]
    NotCentered {
        /// |phi(h)| found.
        value: f64,
        /// Allowed deviation.
        tol: f64,
    },

    /// Donald-style identities need every entropy term finite.
    #[error("support containment fails: a relative entropy term is infinite")]
    SupportViolation,

    /// The superoperator oracle only runs up to a fixed total dimension.
    #[error("total dimension {dim} exceeds the oracle cap {cap}")]
    DimensionCap {
        /// Total dimension requested.
        dim: usize,
        /// Largest supported dimension.
        cap: usize,
    },

    /// The requested handle combination is not supported.
    #[error("unsupported young-function handle: {reason}")]
    UnsupportedHandle {
        /// What was wrong with the handle or its argument.
        reason: &'static str,
    },

    /// An evaluation stayed infinite along the entire ray, so no
    /// Luxemburg norm exists.
    #[error("luxemburg norm undefined: evaluation is infinite along the whole ray")]
    NormUndefined,

    /// An iterative solver hit its iteration cap before reaching its
    /// stationarity target.
    #[error("solver did not converge after {iterations} iterations (best value {best:.6e}, gap {gap:.3e})")]
    NoConvergence {
        /// Iterations spent.
        iterations: usize,
        /// Best objective value reached.
        best: f64,
        /// Residual gap estimate at the last iterate.
        gap: f64,
    },

    /// A chart argument lies outside the open unit ball.
    #[error("observable lies outside the chart ball: norm {norm:.6} >= 1")]
    OutOfChart {
        /// Luxemburg norm of the offending observable.
        norm: f64,
    },

    /// A transport map was applied to the wrong side of the pairing.
    #[error("transport mismatch: {reason}")]
    TransportMismatch {
        /// Which combination was rejected and why.
        reason: &'static str,
    },

    /// A matrix document failed to parse or validate.
    #[error("{context}: {message}")]
    Document {
        /// Field path or file that failed.
        context: String,
        /// What went wrong.
        message: String,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
