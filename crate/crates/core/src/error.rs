use thiserror::Error;

/// Errors raised by the mathematical kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("polynomial is not integer-valued (forward difference {index} is {value})")]
    NotIntegerValued { index: usize, value: String },

    #[error("counts are not a polynomial of degree {degree}: predicted {predicted} at g = {at}, counted {counted}")]
    NotPolynomial {
        degree: usize,
        at: i64,
        predicted: String,
        counted: String,
    },

    #[error("polytope is unbounded in coordinate {0}")]
    Unbounded(usize),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
