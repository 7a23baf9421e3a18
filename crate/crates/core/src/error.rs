use thiserror::Error;

use crate::network::PhaseKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: need at least one mode")]
    InvalidDimension(usize),

    #[error("expected a {expected:?} phase vector, got {found:?}")]
    KindMismatch {
        expected: PhaseKind,
        found: PhaseKind,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid band [{lo}, {hi}] for {modes} modes: {reason}")]
    InvalidBand {
        lo: usize,
        hi: usize,
        modes: usize,
        reason: String,
    },

    #[error("invalid gate spec: {0}")]
    InvalidSpec(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("fidelity is undefined for an all-zero state transform")]
    UndefinedFidelity,

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("oracle limits exceeded: {0}")]
    OracleLimit(String),

    #[error("corrupted solution: stored {field} = {stored:e}, recomputed {recomputed:e}")]
    CorruptedSolution {
        field: &'static str,
        stored: f64,
        recomputed: f64,
    },

    #[error("invalid optimizer config: {0}")]
    InvalidOptimizer(String),
}
