use thiserror::Error;

/// Errors raised by the acquisition model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where a formula is defined.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The quantity requested diverges (e.g. expected time with zero success probability).
    #[error("degenerate input to {op}: {reason}")]
    Degenerate { op: &'static str, reason: String },

    /// A Monte Carlo trial hit the scan cap before acquiring.
    #[error("trial {trial} exceeded the cap of {max_scans} scans (per-scan success probability is ~0)")]
    CapExceeded { trial: u64, max_scans: u64 },

    /// A root finder or minimizer could not bracket or converge.
    #[error("numerical failure in {op}: {reason}")]
    Numerical { op: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(op: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(Error::Domain { op, reason: reason.into() })
}
