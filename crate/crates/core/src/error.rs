use thiserror::Error;

/// Structural errors raised by the algebraic operations.
///
/// Failed property checks are not errors; they are reported through
/// [`crate::report::CheckReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("points lie in different fibers (base distance {distance:e})")]
    FiberMismatch { distance: f64 },

    #[error("no lift available at {0}")]
    LiftUnavailable(String),

    #[error("argument outside the domain: {0}")]
    DomainViolation(String),

    #[error("composition undefined: {0}")]
    CompositionUndefined(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid action: {0}")]
    ActionInvalid(String),

    #[error("hypothesis `{hypothesis}` violated: {witness}")]
    HypothesisViolated { hypothesis: String, witness: String },
}

pub type Result<T> = std::result::Result<T, Error>;
