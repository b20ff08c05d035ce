use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("surface is not a completed quasitriangulation: {0}")]
    NotQuasi(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("form mismatch between torus elements")]
    FormMismatch,
    #[error("leading term of zero element")]
    ZeroElement,
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("vector is not in the basis monoid: {0}")]
    NotInLambda(String),
    #[error("invalid bigon word: {0}")]
    InvalidWord(String),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
