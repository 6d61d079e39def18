use alloc::string::String;

/// Errors raised by the core optimizer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{kind} ordering violated between users {stronger} and {weaker}")]
    OrderingViolated {
        kind: OrderingKind,
        stronger: usize,
        weaker: usize,
    },

    #[error("relaxed solution is not rank one (eigenvalue ratio {ratio:e})")]
    NotRankOne { ratio: f64 },

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("solver failure: {0}")]
    Solver(String),
}

/// Which NOMA ordering a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingKind {
    Channel,
    Power,
}

impl core::fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrderingKind::Channel => f.write_str("channel"),
            OrderingKind::Power => f.write_str("power"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
