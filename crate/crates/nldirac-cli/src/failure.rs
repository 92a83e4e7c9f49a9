//! Process outcome vocabulary. Verification verdicts are data and come back
//! as exit codes from the command functions; this type carries only the two
//! genuine error classes, bad input (exit 3) and numerical failure (exit 4).

use std::fmt;

use nldirac::Error;

#[derive(Debug)]
pub enum Failure {
    /// Unusable flags, config, or input files.
    Input(String),
    /// The computation itself broke down: non-finite state, step underflow,
    /// an exhausted step budget, or a negative radicand under the erroring
    /// policy.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) => write!(f, "input error: {msg}"),
            Failure::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::NonFinite { .. }
            | Error::StepUnderflow { .. }
            | Error::StepBudget { .. }
            | Error::NegativeRadicand { .. } => Failure::Numerical(err.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Input(err.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;
