//! Shared fixtures for the criterion benchmarks.

use entspec_core::spectroscopy::StatePrep;
use entspec_core::{Algorithm, Circuit};

/// θ used by every benchmark circuit.
pub const THETA: f64 = 0.7;

pub fn prep() -> StatePrep {
    StatePrep::theta(THETA)
}

/// Circuits exercised by the simulation benchmarks, labelled `algorithm/n`.
pub fn simulation_cases() -> Vec<(String, Circuit)> {
    [
        (Algorithm::Ht, 3),
        (Algorithm::QeHt4k, 5),
        (Algorithm::Tct, 3),
        (Algorithm::QeTct6k, 5),
        (Algorithm::QeTct4k, 5),
    ]
    .into_iter()
    .map(|(alg, n)| {
        (
            format!("{alg}/{n}"),
            alg.build(n, &prep()).expect("valid builder"),
        )
    })
    .collect()
}
