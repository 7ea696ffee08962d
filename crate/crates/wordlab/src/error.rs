use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {letter} out of range for alphabet of size {size}")]
    LetterOutOfRange { letter: usize, size: usize },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("morphism is not prolongable at the requested letter")]
    NotProlongable,
    #[error("operation undefined on the empty word")]
    EmptyWord,
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
