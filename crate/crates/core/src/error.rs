use thiserror::Error;

/// Failures reported by the library. Every variant maps onto the "domain
/// error" exit status of the command-line tool except where noted there.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GmpError {
    #[error("{name} = {value} is outside its domain ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("level n = {n} is not bound (n_max = {n_max})")]
    NotBound { n: i64, n_max: i64 },

    #[error("normalization overflows: ln N = {0}")]
    Overflow(f64),

    #[error("terminating 2F1 has a pole: c = {c} with n = {n}")]
    Pole { n: usize, c: f64 },

    #[error("invalid algebra label: {0}")]
    Label(String),

    #[error("satellite step leaves the parameter domain: {0}")]
    Step(String),

    #[error("superpartner is singular: kb - l = {0}")]
    Singular(f64),

    #[error("no eigenvalue for level {n}: {reason}")]
    NoEigenvalue { n: usize, reason: String },

    #[error("quadrature did not reach tolerance {tol:e} after {intervals} intervals (error estimate {estimate:e})")]
    Quadrature {
        tol: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, GmpError>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(GmpError::Domain {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}
