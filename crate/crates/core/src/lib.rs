//! Synthesis and verification of frequency-bin linear-optical quantum gates.
//!
//! Qubits are dual-rail frequency bins. Gates are built from alternating
//! pulse shapers (diagonal in frequency) and electro-optic phase modulators
//! (diagonal in time), lifted to heralded multi-photon transformations, and
//! tuned by a multi-start quasi-Newton search that maximizes heralded
//! success probability at a fixed fidelity floor.

mod engine;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod lbfgs;
pub mod metrics;
pub mod network;
pub mod optimize;

pub use error::{Error, Result};
pub use fock::{GateSpec, GateTarget, QubitModes, StateTransform};
pub use metrics::{Metrics, TargetTransform};
pub use network::{Band, ModeUnitary, NetworkConfig, PhaseKind, PhaseVector};
pub use optimize::{evaluate, optimize, verify_solution, OptimizeConfig, Solution};
