use thiserror::Error;

/// Errors raised by the solver, the valuation layer and the simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScreenError {
    /// A model parameter or input violates one of its stated bounds.
    /// The message names the violated bound, e.g. `k + c < 1 violated`.
    #[error("{0}")]
    Invalid(String),

    /// A type (or other probability) fell outside the open unit interval.
    #[error("theta = {0} is outside the open interval (0, 1)")]
    Domain(f64),

    /// The managerial pool carries (numerically) no probability mass.
    #[error("empty managerial pool: F(theta1) = {cdf_at_cutoff} leaves no mass above the cutoff")]
    EmptyPool { cdf_at_cutoff: f64 },

    /// Outside option too large relative to the noise caps.
    #[error("outside option R_min = {r_min} violates R_min < c*Delta = {bound}")]
    OutsideOptionTooHigh { r_min: f64, bound: f64 },

    /// A linear outside option never meets the rent curve on (theta1, 1).
    #[error("no crossing between the rent curve and the outside option rho*theta (rho = {0})")]
    NoCrossing(f64),

    /// A matching weight was not strictly positive on the pool.
    #[error("matching weight is {value} at theta = {theta}; it must be > 0 on the pool")]
    NonPositiveWeight { theta: f64, value: f64 },

    /// The operation needs a density, which discrete distributions lack.
    #[error("operation requires a continuous type distribution")]
    NeedsDensity,
}

pub type Result<T> = std::result::Result<T, ScreenError>;

pub(crate) fn invalid(msg: impl Into<String>) -> ScreenError {
    ScreenError::Invalid(msg.into())
}
