use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no qualifying time in [0, {t_max}] for epsilon {epsilon}")]
    NoSolutionInRange { t_max: f64, epsilon: f64 },

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("per-pulse budget {per_pulse:e} is below the solver floor {floor:e} ({pulses} aligned pulses)")]
    BudgetTooTight { per_pulse: f64, floor: f64, pulses: usize },

    #[error("layer {index}: {source}")]
    Layer {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: msg.into(),
        }
    }

    /// Strips any layer wrapping and returns the underlying cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::Layer { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
