//! Error type shared across the crate.
//!
//! Scans and sweeps must be able to tell divergence apart from bad data, so
//! every failure carries the inputs that produced it.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation. The message names
    /// the violated constraint.
    #[error("domain error: {0}")]
    Domain(String),

    /// A guarded denominator fell below its threshold. Raised instead of
    /// returning huge values so callers can skip the point.
    #[error("singular expression {what}: denominator {value:e} below guard {guard:e}")]
    Singular {
        what: &'static str,
        value: f64,
        guard: f64,
    },

    /// Bracketed solver did not meet its tolerance. Carries the final bracket.
    #[error("root finder did not converge after {iterations} iterations; bracket [{lo}, {hi}], f = [{f_lo:e}, {f_hi:e}]")]
    NoConvergence {
        iterations: usize,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The supplied interval does not bracket a root.
    #[error("no sign change on [{lo}, {hi}]: f = [{f_lo:e}, {f_hi:e}]")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The auxiliary ratio left (0, 1) while evaluating at `t`.
    #[error("tau = {tau} outside (0, 1) at t = {t}")]
    TauOutOfRange { t: f64, tau: f64 },

    /// tau(1) already sits at or above 1; the point cannot be analyzed.
    #[error("outside analyzable region: tau(1) = {tau} >= 1")]
    OutsideAnalyzableRegion { tau: f64 },

    /// A finite-difference stencil left the admissible domain.
    #[error("finite-difference step {h:e} leaves the domain at s2 = {s2}")]
    StepTooLarge { s2: f64, h: f64 },

    /// Adaptive quadrature hit its depth limit before the tolerance.
    #[error("quadrature did not reach tolerance {tol:e} on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64, tol: f64 },

    /// An in-domain point produced data that contradicts the domain
    /// guarantees. Signals a validation bug, not bad user input.
    #[error("inconsistent domain data: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by out-of-domain input (as opposed to numeric
    /// failure). The CLI maps these to a distinct exit code.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::OutsideAnalyzableRegion { .. } | Error::StepTooLarge { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
