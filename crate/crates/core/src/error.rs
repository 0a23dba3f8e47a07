use std::fmt;

use thiserror::Error;

/// Which positivity constraint was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositiveQuantity {
    Density,
    Pressure,
}

impl fmt::Display for PositiveQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositiveQuantity::Density => f.write_str("density"),
            PositiveQuantity::Pressure => f.write_str("pressure"),
        }
    }
}

/// A recoverable loss of positivity at a grid node.
///
/// The time integrator treats this as a signal to reject the step and retry
/// with a smaller time step.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("non-positive {quantity} {value:e} at node ({}, {}, {})", .node[0], .node[1], .node[2])]
pub struct PositivityFault {
    pub quantity: PositiveQuantity,
    pub value: f64,
    pub node: [usize; 3],
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid gas parameters: {0}")]
    Gas(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Positivity(#[from] PositivityFault),

    #[error("run aborted at t = {t}: {fault} persisted after {rejections} step rejections")]
    Abort {
        t: f64,
        fault: PositivityFault,
        rejections: usize,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Convergence(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status: 1 for a physics abort, 2 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Positivity(_) | Error::Abort { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
