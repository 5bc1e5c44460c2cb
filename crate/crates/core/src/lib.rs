//! Entanglement spectroscopy circuits, a noisy state-vector simulator for
//! them, and an effective-depth analysis for circuits with mid-circuit resets.
//!
//! The most used types are re-exported at the crate root.

pub mod circuit;
pub mod depthlab;
pub mod sim;
pub mod spectroscopy;
pub mod stats;
pub mod sweep;

pub use circuit::{Circuit, CircuitError, DurationTable, GateKind, Instruction, Operation, Program};
pub use depthlab::{depth_table, effective_depth, DepthReport, DepthRow};
pub use sim::{run, Counts, NoiseProfile, SimError};
pub use spectroscopy::{
    newton_girard, Algorithm, EstimateRecord, SpectroscopyError, SpectroscopyJob, Spectrum, StatePrep,
};
pub use sweep::{run_sweep, SweepConfig, SweepResult};
