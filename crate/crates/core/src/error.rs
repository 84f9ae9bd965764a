use thiserror::Error;

/// Errors raised anywhere in the simulation chain.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter is out of its allowed domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A configuration is internally inconsistent (rates, steps, ranges).
    #[error("configuration error: {0}")]
    Config(String),

    /// The integrator produced a non-finite or unphysical state.
    #[error("integration diverged at step {step}: {reason}")]
    Divergence { step: usize, reason: String },

    /// Input data has the wrong shape or is too short.
    #[error("invalid input: {0}")]
    Input(String),

    /// Input data carries no usable information (flat signal, zero range).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The key stream is shorter than the data it must cover.
    #[error("key exhausted: need {needed} bits, key holds {available}")]
    KeyExhausted { needed: usize, available: usize },

    /// Malformed file contents.
    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// An error tagged with the pipeline stage that produced it.
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Strips any stage tags and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Attaches a stage tag to an error result.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}
