use core::fmt;

use crate::expr::EvalError;
use crate::quad::QuadError;

/// An argument outside the domain of an operation.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError {
    /// Name of the offending parameter or invariant.
    pub what: &'static str,
    pub value: f64,
    /// Human-readable requirement, e.g. `"must be > 0"`.
    pub requirement: &'static str,
}

impl DomainError {
    pub(crate) fn new(what: &'static str, value: f64, requirement: &'static str) -> Self {
        Self { what, value, requirement }
    }
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} {}", self.what, self.value, self.requirement)
    }
}

impl core::error::Error for DomainError {}

/// Any failure produced by the operators and bound evaluators.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Domain(DomainError),
    Quad(QuadError),
    Eval(EvalError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(e) => write!(f, "domain error: {e}"),
            Error::Quad(e) => write!(f, "quadrature error: {e}"),
            Error::Eval(e) => write!(f, "evaluation error: {e}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Domain(e) => Some(e),
            Error::Quad(e) => Some(e),
            Error::Eval(e) => Some(e),
        }
    }
}

impl From<DomainError> for Error {
    fn from(e: DomainError) -> Self {
        Error::Domain(e)
    }
}

impl From<QuadError> for Error {
    fn from(e: QuadError) -> Self {
        Error::Quad(e)
    }
}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Eval(e)
    }
}
