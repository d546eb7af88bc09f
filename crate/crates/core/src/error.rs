use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text. `line` is 1-based; 0 when the input as a whole is at fault.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Caller-supplied data that does not fit the schema or model.
    #[error("{0}")]
    Input(String),

    /// Invalid schema, class set, or policy.
    #[error("{0}")]
    Config(String),

    /// A conditional or prior would need a zero denominator.
    #[error("zero denominator for class {class} in {context}")]
    Fit { class: String, context: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn input(message: impl Into<String>) -> Self {
        Error::Input(message.into())
    }

    pub(crate) fn config(message: impl Into<String>) -> Self {
        Error::Config(message.into())
    }

    /// Short machine-readable category used by the CLI error prefix.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Input(_) => "input",
            Error::Config(_) => "config",
            Error::Fit { .. } => "fit",
        }
    }
}
