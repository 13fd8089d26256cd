use thiserror::Error;

/// Errors raised by the algebra, the engines and the scene loader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),

    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty point set")]
    EmptySet,

    #[error("point sets carry no grid or grids disagree on cell size")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("map is not real-linear: {0}")]
    NotLinear(String),

    #[error("system is not contractive: {0}")]
    NotContractive(String),

    #[error("power iteration did not converge after {iterations} iterations (last change {delta:e})")]
    NonConvergence { iterations: usize, delta: f64 },

    #[error("no convergence within {0} iterations (last residual {1:e})")]
    MaxIterations(usize, f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("scene error at `{field}`: {message}")]
    Scene { field: String, message: String },

    #[error("malformed scene JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn scene(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Scene {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors that stem from an invalid scene or invalid inputs,
    /// as opposed to an engine failing at run time.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Scene { .. }
                | Error::Json { .. }
                | Error::AlgebraMismatch(..)
                | Error::UnsupportedAlgebra(_)
                | Error::Shape(_)
                | Error::NotContractive(_)
                | Error::InvalidArgument(_)
                | Error::NotLinear(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
