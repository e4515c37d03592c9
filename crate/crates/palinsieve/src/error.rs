//! Crate-wide error type.
//!
//! Guard violations (size, memory, grid resolution) are separated from plain
//! domain errors so the command-line layer can map them all to a usage-style
//! exit status while tests can still match on the specific failure.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A fraction was requested with denominator zero.
    #[error("denominator must be nonzero")]
    InvalidDenominator,

    /// Catch-all for arguments outside an operation's stated domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A modular inverse was requested for non-coprime arguments.
    #[error("{value} has no inverse modulo {modulus}")]
    NoInverse { value: u64, modulus: u64 },

    /// A quadrature grid too coarse to resolve the integrand exactly.
    #[error("grid of {grid} points is too coarse; need at least {required}")]
    GridTooCoarse { grid: u64, required: u64 },

    /// A computation whose size parameter exceeds the hard problem-size cap.
    #[error("problem size {requested} exceeds the cap of {limit}")]
    SizeGuard { requested: u128, limit: u128 },

    /// Estimated allocation above the PALINSIEVE_GUARD_MB budget.
    #[error("estimated {needed_mb} MiB exceeds the {cap_mb} MiB memory guard (PALINSIEVE_GUARD_MB)")]
    MemoryGuard { needed_mb: u64, cap_mb: u64 },

    /// Point sets handed to the large-sieve check must be delta-spaced.
    #[error("points {i} and {j} are {dist:.3e} apart, closer than the declared spacing {delta:.3e}")]
    SpacingViolation { i: usize, j: usize, dist: f64, delta: f64 },

    /// Least-squares fits need enough well-defined points to determine a slope.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Integer arithmetic that would exceed the fixed-width range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A floating-point computation produced NaN; never propagated silently.
    #[error("NaN produced in {0}")]
    NotFinite(&'static str),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Error {
        Error::Domain(msg.into())
    }
}

/// Allocation budget in MiB. Overridable through the PALINSIEVE_GUARD_MB
/// environment variable; unparsable values fall back to the default.
pub fn memory_guard_mb() -> u64 {
    std::env::var("PALINSIEVE_GUARD_MB")
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .unwrap_or(1024)
}

/// Fail with [`Error::MemoryGuard`] when an estimated allocation would
/// exceed the current budget.
pub fn check_memory(estimated_bytes: u128) -> Result<()> {
    let cap_mb = memory_guard_mb();
    let needed_mb = (estimated_bytes / (1024 * 1024)) as u64;
    if needed_mb > cap_mb {
        return Err(Error::MemoryGuard { needed_mb, cap_mb });
    }
    Ok(())
}
