use thiserror::Error;

/// Errors raised by the qgraph algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("only odd primes are supported here (got p = {0}); the exact p-adic integrals are restricted to odd residue characteristic")]
    EvenPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate quadratic form (det = 0)")]
    Degenerate,
    #[error("form is anisotropic at this place")]
    Anisotropic,
    #[error("form is isotropic at this place")]
    Isotropic,
    #[error("operation is local; the global place Q is not allowed here")]
    GlobalPlace,
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
    #[error("quadrature did not reach tolerance {tol:e} within {panels} panels (achieved error estimate {achieved:e})")]
    QuadratureBudget { tol: f64, achieved: f64, panels: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("integer {0} exceeds the trial-division factoring limit")]
    FactorizationLimit(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("the sphere Q = 1 is empty (Q does not represent 1)")]
    EmptySphere,
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
