use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("abscissa {x} outside the open domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("coincident points: kernel and triple arguments must be pairwise distinct")]
    CoincidentPoints,

    #[error("coincident abscissas: {0} and {1}")]
    CoincidentAbscissas(f64, f64),

    #[error("collinear triple: operation needs a non-degenerate triangle")]
    Collinear,

    #[error("empty interval ({lo}, {hi})")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("kernel `{0}` needs abscissas on its curve but the triple carries none")]
    MissingAbscissas(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid suite configuration: {0}")]
    InvalidSuite(String),

    #[error("search budget must be positive")]
    ZeroBudget,

    #[error("degenerate search region: {0}")]
    DegenerateRegion(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
