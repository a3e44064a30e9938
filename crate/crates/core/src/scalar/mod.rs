//! The coefficient field Q(j)(q, p, q', k) and the ansatz unknowns.

mod cyclo;
mod gcd;
mod poly;
mod ratfun;

pub use cyclo::CycloRational;
pub use gcd::{gcd, lcm};
pub use poly::{Monomial, Poly, Var, NVARS};
pub use ratfun::{random_point, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("malformed scalar: zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution hits a pole of {0}")]
    Pole(String),
    #[error("{0}")]
    Parse(String),
}
