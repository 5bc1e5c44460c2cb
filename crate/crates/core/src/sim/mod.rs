//! Shot-based stochastic-trajectory simulation.
//!
//! Each shot evolves a pure [`StateVector`]; noise channels are unraveled
//! into random jumps whose average over shots reproduces the channel. See
//! [`NoiseProfile`] for the parameters and [`run`] for the entry point.

mod counts;
mod engine;
mod noise;
mod state;

use thiserror::Error;

pub use counts::{BitString, Counts};
pub use engine::{compile, run, run_with, shot_rng, CompiledCircuit, ExecutionOrder, ShotRecord, SimOptions};
pub use noise::{NoiseError, NoiseProfile};
pub use state::StateVector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("`{0}` is not a unitary gate")]
    NotUnitary(&'static str),
    #[error("`{0}` given {1} qubits")]
    Arity(&'static str, usize),
    #[error("qubit {0} used twice in one gate")]
    RepeatedQubit(usize),
    #[error("amplitude vector of length {0} is not a normalizable power of two")]
    BadAmplitudes(usize),
    #[error("outcome `{0}` is not a {1}-bit string")]
    BadOutcome(String, usize),
    #[error("invalid counts JSON: {0}")]
    Json(String),
    #[error("qubit {qubit} idles without padding over [{start}, {end}); run pad_idle first")]
    UnpaddedGap { qubit: usize, start: u64, end: u64 },
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error("shot count must be positive")]
    ZeroShots,
}
