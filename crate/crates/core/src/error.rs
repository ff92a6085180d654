use thiserror::Error;

/// Errors raised by the numerical operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at a singular point of the map or potential.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// The configuration is degenerate for the requested operation.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("radius {r} outside profile domain ({lo}, {hi})")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    /// A limit or extrapolation did not settle. `samples` holds the `(abscissa, value)`
    /// pairs that were examined.
    #[error("non-convergent limit: {msg}")]
    NonConvergent { msg: String, samples: Vec<(f64, f64)> },

    /// An iterative routine gave up.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
