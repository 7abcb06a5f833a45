use thiserror::Error;

/// Errors surfaced by the simulator, learners and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is invalid. `field` is a dotted path such as `cell.p_min_dbm`.
    #[error("invalid configuration at `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// A caller broke an operation's precondition (shape mismatch, infeasible allocation, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Training produced a non-finite loss or gradient.
    #[error("training diverged: {0}")]
    Divergence(String),

    /// Not enough experience in the replay buffer to draw the requested batch.
    #[error("replay buffer not ready: have {have} transitions, need {need}")]
    NotReady { have: usize, need: usize },

    #[error("{context}: {source}")]
    Phase {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Wraps the error with a description of where it happened (phase, seed, ...).
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Phase {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
