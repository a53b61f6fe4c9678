use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point fell outside the bulk window |x| < N/2.
    #[error("bulk domain violation: |{value}| exceeds N/2 = {half_width}")]
    BulkDomain { value: f64, half_width: f64 },

    /// Two operators built on different quadrature grids were combined.
    #[error("grid mismatch: {left} vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    /// A kernel evaluated to NaN or infinity at a quadrature node pair.
    #[error("non-finite kernel value {value} at ({x}, {y})")]
    NonFiniteKernel { x: f64, y: f64, value: f64 },

    /// A restricted-operator eigenvalue left the [0, 1] band by more than
    /// the clamp tolerance; usually a sign of an under-resolved grid.
    #[error("eigenvalue {value} outside [-{tol}, 1+{tol}]")]
    EigenvalueOutOfRange { value: f64, tol: f64 },

    /// The dense eigensolver or SVD did not converge.
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    /// A sampled matrix failed its group-membership checks.
    #[error("group element defect: {0}")]
    GroupDefect(String),

    /// A designated trivial eigenvalue was not where the ensemble forces it.
    #[error("trivial eigenvalue missing: nearest to {target} was {found} (|distance| {distance:.3e} > 1e-6)")]
    TrivialEigenvalueMissing {
        target: f64,
        found: f64,
        distance: f64,
    },

    /// Doubling the quadrature grid moved a norm by more than the stability
    /// tolerance, so the reported value cannot be trusted.
    #[error("grid refinement unstable: n={n} gave {coarse}, 2n gave {fine} (rel diff {rel:.3e})")]
    RefinementUnstable {
        n: usize,
        coarse: f64,
        fine: f64,
        rel: f64,
    },

    /// A checked mathematical invariant failed.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Malformed configuration input.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
