use thiserror::Error;

use crate::model::EquationId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "negative {coupling} radicand {radicand:.6e} at grid index {index} \
         under the error-on-negative policy"
    )]
    NegativeRadicand {
        coupling: &'static str,
        index: usize,
        radicand: f64,
    },

    #[error("{equation} takes the {expected} coupling family, not {found}")]
    CouplingMismatch {
        equation: EquationId,
        expected: &'static str,
        found: &'static str,
    },

    #[error("{equation} does not support the stationary reduction: {detail}")]
    NotSeparable {
        equation: EquationId,
        detail: &'static str,
    },

    #[error(
        "azimuthal number {kappa} is not a half-odd integer; a closed angular \
         domain admits only kappa in {{-1/2, 1/2, -3/2, 3/2, ...}}"
    )]
    KappaNotQuantized { kappa: f64 },

    #[error(
        "s = {s} lies outside the validity domain of catalog row {row}; \
         nearest singular point is s = {nearest}"
    )]
    OutOfDomain { row: u8, s: f64, nearest: f64 },

    #[error("invalid constants for catalog row {row}: {what}")]
    InvalidConstants { row: u8, what: String },

    #[error("state is not y-independent: column variation {variation:.3e} exceeds 1e-12")]
    NotYIndependent { variation: f64 },

    #[error("non-finite {what} at t = {time} (step {step})")]
    NonFinite {
        what: &'static str,
        time: f64,
        step: usize,
    },

    #[error("adaptive step size underflowed at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("step budget of {max_steps} exhausted at t = {time}")]
    StepBudget { time: f64, max_steps: usize },
}
