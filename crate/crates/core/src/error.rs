use thiserror::Error;

/// Errors raised by evaluation, root finding and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The series did not reach the requested tolerance within `max_terms`.
    /// Usually means q is too close to 1 for direct summation.
    #[error("tail bound {bound:e} still above tolerance after {terms} terms")]
    TailBoundUnmet { terms: usize, bound: f64 },

    #[error("log-value {log_value} is not representable as a finite f64; use the log form")]
    Overflow { log_value: f64 },

    #[error("derivative order {0} is not supported (0..=3)")]
    UnsupportedOrder(u32),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root search stopped after {iterations} iterations with bracket width {width:e}")]
    MaxIterations { iterations: usize, width: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("denominator {denominator:e} at x = {x} is indistinguishable from zero")]
    PoleProximity { x: f64, denominator: f64 },

    #[error("statistic requires parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("finite-difference stencil [{lo}, {hi}] leaves (0, inf)")]
    DomainViolation { lo: f64, hi: f64 },

    #[error("ratio bound {ratio} is not contracting; increase N")]
    RatioNotContracting { ratio: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
