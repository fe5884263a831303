use thiserror::Error;

use crate::point::Sym;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter {0} is not in the alphabet")]
    LetterOutsideAlphabet(Sym),
    #[error("word is not in the language of the shift")]
    NotInLanguage,
    #[error("point is not in the domain of the code")]
    OutsideDomain,
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(usize),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed point: {0}")]
    MalformedPoint(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("generator failed at index {index}: {reason}")]
    Generator { index: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
