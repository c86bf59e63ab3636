use std::fmt;

use weave_core::Error;

pub const INPUT: i32 = 2;
pub const SOLVER: i32 = 3;
pub const MISSING: i32 = 4;
pub const NOT_CONVERGED: i32 = 5;

/// Message plus process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: INPUT,
            message: message.into(),
        }
    }

    pub fn missing(message: impl Into<String>) -> Self {
        CliError {
            code: MISSING,
            message: message.into(),
        }
    }

    pub fn not_converged(message: impl Into<String>) -> Self {
        CliError {
            code: NOT_CONVERGED,
            message: message.into(),
        }
    }

    /// A core error raised while validating user input.
    pub fn from_input(e: Error) -> Self {
        CliError::input(e.to_string())
    }

    /// A core error raised by a solver; input-shaped errors keep code 2.
    pub fn from_solver(e: Error) -> Self {
        let code = match e {
            Error::NonFinite(_)
            | Error::NegativeFlow { .. }
            | Error::SimplexViolation { .. }
            | Error::InvalidCoefficient { .. }
            | Error::AngleOutOfRange { .. }
            | Error::InvalidWeight(_)
            | Error::WeightSum { .. }
            | Error::EmptyPopulation
            | Error::InvalidGrid(_)
            | Error::EmptyDataset
            | Error::BoundsInfeasible { .. } => INPUT,
            _ => SOLVER,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::from_solver(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(format!("write failed: {e}"))
    }
}
