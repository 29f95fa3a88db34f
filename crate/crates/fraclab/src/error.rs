//! Crate-wide error type. Numerical values carried by errors are reported as
//! `f64` regardless of the scalar the computation ran in.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested exactly on a non-removable singularity.
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// An integral or criterion was detected to diverge.
    #[error("divergent: {0}")]
    Divergent(String),

    /// Quadrature ran out of budget; carries the best estimate found.
    #[error("evaluation budget exhausted: best estimate {best_estimate} (abs error {abs_error}, {evaluations} evaluations)")]
    Budget {
        best_estimate: f64,
        abs_error: f64,
        evaluations: usize,
    },

    /// Scaling probe could not certify exponents in (0, 1).
    #[error("scaling probe failed: {0}")]
    Probe(String),

    /// Iteration did not reach tolerance within the step cap.
    #[error("no convergence after {iterations} iterations (last sup-diff {last_diff})")]
    NonConvergence { iterations: usize, last_diff: f64 },

    /// Monotone iteration escaped its fitted supersolution.
    #[error("supersolution breached at iteration {iteration}: m is too large")]
    SupersolutionBreach { iteration: usize },

    /// Picard iterate left the invariant ball of the fixed-point argument.
    #[error("contraction failure: iterate norm {norm} exceeded bound {bound}; m is too large")]
    ContractionFailure { norm: f64, bound: f64 },

    /// Boundary-limit extrapolation failed its Cauchy gate.
    #[error("boundary limit did not stabilise: {0}")]
    LimitFailure(String),

    /// A stated precondition does not hold for the supplied data.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
