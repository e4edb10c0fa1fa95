use thiserror::Error;

/// Errors raised by model construction, simulation and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The model or mesh definition is inconsistent.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A simulator could not continue (rate overflow, non-finite drift, ...).
    #[error("simulation failed at t = {time}: {message}")]
    Simulation { time: f64, message: String },

    /// An internal invariant was broken; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// A replicate inside an ensemble failed.
    #[error("replicate {replicate}: {source}")]
    Replicate {
        replicate: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
