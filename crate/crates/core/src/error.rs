use thiserror::Error;

/// Errors raised across the toolkit.
///
/// The CLI maps each variant to an exit code, see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("mountain-pass geometry not found: {0}")]
    GeometryNotFound(String),

    #[error("nonlocal coefficient a - bA(u) = {coefficient:e} is not positive at iteration {iteration}")]
    DegenerateCoefficient { coefficient: f64, iteration: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing required key `{0}`")]
    MissingKey(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short class name printed on the diagnostic stream.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Shape(_) => "ShapeError",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::GeometryNotFound(_) => "GeometryNotFound",
            Error::DegenerateCoefficient { .. } => "DegenerateCoefficient",
            Error::Parse { .. } => "ParseError",
            Error::MissingKey(_) => "MissingKey",
            Error::Io(_) => "IoError",
        }
    }

    /// Process exit status: 2 parse/validation, 3 non-convergence, 4 degenerate coefficient.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Shape(_)
            | Error::Parse { .. }
            | Error::MissingKey(_)
            | Error::Io(_) => 2,
            Error::MaxIterations { .. } | Error::GeometryNotFound(_) => 3,
            Error::DegenerateCoefficient { .. } => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_check(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::Shape(format!("{what}: got {got} values, expected {expected}")));
    }
    Ok(())
}
