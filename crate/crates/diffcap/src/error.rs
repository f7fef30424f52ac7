use std::fmt;

/// Errors produced by the special functions and solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside a function's domain.
    Domain(String),
    /// Result would underflow the scalar type; the message names the
    /// log-domain alternative where one exists.
    Underflow(String),
    /// Root bracket does not contain a sign change.
    NoSignChange(String),
    /// Iterative method exhausted its iteration budget.
    Convergence(String),
    /// The equation has no solution representable in the scalar type.
    NoSolution(String),
    /// Requested operating point cannot be realized (e.g. even full-rate
    /// emission cannot reach the target level).
    Infeasible(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Underflow(msg) => write!(f, "underflow: {msg}"),
            Error::NoSignChange(msg) => write!(f, "no sign change: {msg}"),
            Error::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            Error::NoSolution(msg) => write!(f, "no solution: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
