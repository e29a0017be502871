use thiserror::Error;

/// Errors raised by constructions and searches.
///
/// Law violations are never reported through this type; they end up as
/// failing entries of a [`crate::laws::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("element {element} out of range for object of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("not a morphism of the ambient category: {0}")]
    NotAMorphism(String),
    #[error("cone condition fails: {0}")]
    NotACone(String),
    #[error("{0} unsupported")]
    Unsupported(&'static str),
    #[error("arrow is not invertible")]
    NotInvertible,
    #[error("cocycle violation: elements {first} and {second} lie in one fiber but map to {first_value} and {second_value}")]
    CocycleViolation {
        first: usize,
        second: usize,
        first_value: usize,
        second_value: usize,
    },
    #[error("arrow is not effective: {0}")]
    NotEffective(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted within bound {bound}: {what}")]
    NotFoundWithinBound { what: String, bound: usize },
    #[error("{0}")]
    Law(crate::report::Violation),
}

impl From<crate::report::Violation> for Error {
    fn from(v: crate::report::Violation) -> Self {
        Error::Law(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
