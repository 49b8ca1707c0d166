//! Exit codes and the error type that carries them.

use std::fmt;

use xyzchain_core::Error;

/// Process exit codes. These values are part of the CLI contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum Exit {
    Ok = 0,
    /// Bad flags, config entries or output path.
    Usage = 2,
    /// A grid point or scan failed numerically.
    Numerical = 3,
    /// No transition inside the requested bracket.
    NoTransition = 4,
    /// At least one validation suite failed.
    ValidationFailed = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            exit: Exit::Usage,
            message: message.into(),
        }
    }

    /// Classifies a library error raised while computing.
    pub fn from_core(e: Error) -> Self {
        let exit = match e {
            Error::NoTransition { .. } => Exit::NoTransition,
            Error::InvalidParams(_) | Error::NegativeTemperature(_) | Error::NonPositiveTemperature(_) => Exit::Usage,
            _ => Exit::Numerical,
        };
        CliError {
            exit,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_codes() {
        let nt = CliError::from_core(Error::NoTransition { lo: 0.0, hi: 1.0 });
        assert_eq!(nt.exit.code(), 4);
        let grid = CliError::from_core(Error::GridPoint {
            index: 3,
            coordinates: "B=1".into(),
            source: Box::new(Error::NoConvergence {
                sweeps: 100,
                off_diagonal: 1.0,
            }),
        });
        assert_eq!(grid.exit.code(), 3);
        assert!(grid.message.contains("B=1"));
        assert_eq!(CliError::from_core(Error::InvalidParams("x".into())).exit, Exit::Usage);
    }
}
