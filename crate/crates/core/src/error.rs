use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// An asymptotic form was queried outside the region where it applies.
    Validity(String),
    /// An adaptive integrator exhausted its subdivision budget.
    Convergence(String),
    /// A grid is too coarse for the signal it is asked to carry.
    Resolution(String),
    /// A sampling grid does not span enough of the function's support.
    Coverage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Validity(msg) => write!(f, "outside validity domain: {msg}"),
            Error::Convergence(msg) => write!(f, "quadrature did not converge: {msg}"),
            Error::Resolution(msg) => write!(f, "insufficient resolution: {msg}"),
            Error::Coverage(msg) => write!(f, "insufficient grid coverage: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!("{name} must be positive and finite, got {value}")))
    }
}
