use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("variable {0} left unbound")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("zero polynomial has no finite root multiplicity")]
    ZeroPolynomial,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("invalid product factor: {0}")]
    BadFactor(String),
    #[error("diagram of height {height} does not fit gl({n})")]
    TooTall { height: usize, n: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("grading window exhausted")]
    WindowExhausted,
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
