use thiserror::Error;

/// Errors produced by the solver, the certification layer and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate triangle: doubled area {doubled_area:e} is below {threshold:e}")]
    DegenerateTriangle { doubled_area: f64, threshold: f64 },

    #[error("invalid canonical triangle (a={a}, b={b}, c={c}): all parameters must be positive and finite")]
    InvalidCanonical { a: f64, b: f64, c: f64 },

    #[error("invalid exponent {n}: expected {expected}")]
    InvalidExponent { n: f64, expected: &'static str },

    #[error("point ({x}, {y}) is not strictly inside the triangle")]
    PointNotInterior { x: f64, y: f64 },

    #[error("point ({x}, {y}) violates a triangle constraint by more than the tolerance")]
    PointNotFeasible { x: f64, y: f64 },

    #[error("projected gradient did not converge after {iterations} iterations (residual {residual:e})")]
    DidNotConverge { iterations: usize, residual: f64 },

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_above_one(n: f64) -> Result<()> {
    if n.is_finite() && n > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent { n, expected: "a finite real n > 1" })
    }
}

pub(crate) fn require_at_least_one(n: f64) -> Result<()> {
    if n.is_finite() && n >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent { n, expected: "a finite real n >= 1" })
    }
}
