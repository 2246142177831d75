use core::fmt;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violates the documented precondition.
    InvalidArgument(&'static str),
    /// The argument is outside the mathematical domain of the function.
    Domain(&'static str),
    /// An adaptive procedure ran out of budget before meeting its tolerance.
    Accuracy {
        what: &'static str,
        /// Best estimate reached before giving up.
        estimate: f64,
        /// Error estimate attached to `estimate`.
        error: f64,
    },
    /// A root finder was given a bracket without a sign change.
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// The balance function vanishes identically on the bracket.
    Degenerate(&'static str),
    /// Failure that should not happen for valid input.
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Accuracy { what, estimate, error } => write!(
                f,
                "accuracy not reached in {what}: estimate {estimate:e} with error {error:e}"
            ),
            Error::Bracket { lo, hi, f_lo, f_hi } => {
                write!(f, "no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")
            }
            Error::Degenerate(msg) => write!(f, "degenerate problem: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
