use alloc::string::String;
use core::fmt;

/// Error type shared by every module in the crate.
///
/// The split matters to callers: `Numerical` means a computation was attempted
/// and failed to converge or left the representable range, everything else
/// means the inputs were rejected before any real work happened.
#[derive(Debug, Clone, PartialEq)]
pub enum CrError {
    /// Probability masses are negative, don't sum to one, or have wrong shape.
    InvalidDistribution(String),
    /// A scalar argument is outside its mathematical domain.
    Domain(String),
    /// Matrix or table dimensions don't line up.
    DimensionMismatch(String),
    /// A configuration value is unusable (bad hyperparameter, resource cap).
    Config(String),
    /// Divergence, overflow, or a failed convergence check at run time.
    Numerical(String),
    /// The requested combination is outside what this build implements.
    Unsupported(String),
    /// A gated quantity was requested while its precondition is false.
    NotApplicable(String),
}

impl fmt::Display for CrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrError::InvalidDistribution(m) => write!(f, "invalid distribution: {m}"),
            CrError::Domain(m) => write!(f, "domain error: {m}"),
            CrError::DimensionMismatch(m) => write!(f, "dimension mismatch: {m}"),
            CrError::Config(m) => write!(f, "configuration error: {m}"),
            CrError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CrError::Unsupported(m) => write!(f, "unsupported: {m}"),
            CrError::NotApplicable(m) => write!(f, "not applicable: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CrError {}

pub type Result<T> = core::result::Result<T, CrError>;
