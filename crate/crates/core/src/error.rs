use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// The variants split into input problems (`InvalidArgument`, `Parse`,
/// `ResourceLimit`) and internal consistency failures (`Consistency`,
/// `Verification`), which the CLI maps to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{what} exceeds the configured cap of {cap}")]
    ResourceLimit { what: String, cap: usize },

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("invariance check failed: shape {shape}, S = {tableau}, generator {generator}")]
    Verification { shape: String, tableau: String, generator: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than an internal failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidArgument(_) | Error::Parse { .. } | Error::ResourceLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn consistency(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}
