//! Exact workbench for covariant differential calculi on quantum planes and
//! superplanes with d^2 = 0 and d^3 = 0.

pub mod scalar;
pub mod expr;
pub mod ncalgebra;
pub mod differential;
pub mod presets;
pub mod covariance;
