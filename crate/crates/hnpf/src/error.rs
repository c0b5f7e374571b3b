//! Crate-wide error type.

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by problem evaluation, training, filtering and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller handed us something structurally unusable (empty batch,
    /// unknown case name, inconsistent lengths, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A point had the wrong number of coordinates for the problem.
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An objective evaluated to NaN or infinity at the queried point.
    #[error("objective {index} evaluated to a non-finite value")]
    NonFiniteObjective { index: usize },

    /// A constraint evaluated to NaN or infinity at the queried point.
    #[error("constraint {index} evaluated to a non-finite value")]
    NonFiniteConstraint { index: usize },

    /// A gradient component came back NaN or infinite.
    #[error("gradient of {of} {index} has a non-finite component")]
    NonFiniteGradient { of: &'static str, index: usize },

    /// The discriminant could not be computed at a point.
    #[error("discriminant is non-finite at the queried point")]
    NonFiniteDiscriminant,

    /// Training produced a non-finite loss and was aborted.
    #[error("training diverged at epoch {epoch}: {message}")]
    Training { epoch: usize, message: String },

    /// An operation needed the analytic front of a case that has none.
    #[error("case {case} has no analytic front description")]
    NoAnalyticFront { case: String },

    /// A text artifact (CSV row, model file line, expression) failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A configuration file or expression was rejected.
    #[error("configuration error: {0}")]
    Config(String),

    /// A pipeline stage failed.  Artifacts produced by the stages that ran
    /// before it are left on disk so a failed run can still be inspected.
    #[error("stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand for [`Error::Input`].
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
