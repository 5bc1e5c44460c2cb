use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::DurationTable;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("unknown noise preset `{0}` (expected paper-main, paper-reduced or noiseless)")]
    UnknownPreset(String),
    #[error("{0} must lie in [0, 1], got {1}")]
    Probability(&'static str, f64),
    #[error("T1 and T2 must be equal (got {0:?} and {1:?})")]
    UnequalRelaxation(Option<f64>, Option<f64>),
    #[error("T1 must be positive, got {0}")]
    NonPositiveT1(f64),
    #[error("cnot error multiplier must be non-negative, got {0}")]
    NegativeMultiplier(f64),
    #[error("combined {0} error probability {1} exceeds 1")]
    CombinedProbability(&'static str, f64),
    #[error("durations must all be positive")]
    Durations,
    #[error("invalid noise profile JSON: {0}")]
    Json(String),
}

/// Stochastic error parameters. `t1 = None` disables thermal relaxation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct NoiseProfile {
    pub readout_flip_prob: f64,
    #[serde(rename = "T1")]
    pub t1: Option<f64>,
    #[serde(rename = "T2")]
    pub t2: Option<f64>,
    pub excited_population: f64,
    pub pauli_prob_per_axis_1q: f64,
    pub depolarizing_lambda_1q: f64,
    pub cnot_error_multiplier: f64,
    #[serde(default)]
    pub durations: DurationTable,
}

impl Default for NoiseProfile {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl NoiseProfile {
    pub const PRESETS: [&'static str; 3] = ["paper-main", "paper-reduced", "noiseless"];

    pub fn noiseless() -> Self {
        NoiseProfile {
            readout_flip_prob: 0.0,
            t1: None,
            t2: None,
            excited_population: 0.0,
            pauli_prob_per_axis_1q: 0.0,
            depolarizing_lambda_1q: 0.0,
            cnot_error_multiplier: 1.0,
            durations: DurationTable::default(),
        }
    }

    pub fn paper_main() -> Self {
        NoiseProfile {
            readout_flip_prob: 0.02,
            t1: Some(2000.0),
            t2: Some(2000.0),
            excited_population: 1e-7,
            pauli_prob_per_axis_1q: 0.001,
            depolarizing_lambda_1q: 0.001,
            cnot_error_multiplier: 5.0,
            durations: DurationTable::default(),
        }
    }

    /// Main preset with both gate-error parameters divided by ten.
    pub fn paper_reduced() -> Self {
        let mut p = Self::paper_main();
        p.pauli_prob_per_axis_1q /= 10.0;
        p.depolarizing_lambda_1q /= 10.0;
        p
    }

    pub fn preset(name: &str) -> Result<Self, NoiseError> {
        match name {
            "paper-main" => Ok(Self::paper_main()),
            "paper-reduced" => Ok(Self::paper_reduced()),
            "noiseless" => Ok(Self::noiseless()),
            other => Err(NoiseError::UnknownPreset(other.to_string())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, NoiseError> {
        let p: NoiseProfile = serde_json::from_str(text).map_err(|e| NoiseError::Json(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, v) in [
            ("readoutFlipProb", self.readout_flip_prob),
            ("excitedPopulation", self.excited_population),
            ("pauliProbPerAxis1q", self.pauli_prob_per_axis_1q),
            ("depolarizingLambda1q", self.depolarizing_lambda_1q),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(NoiseError::Probability(name, v));
            }
        }
        if self.t1 != self.t2 {
            return Err(NoiseError::UnequalRelaxation(self.t1, self.t2));
        }
        if let Some(t1) = self.t1 {
            if t1.is_nan() || t1 <= 0.0 {
                return Err(NoiseError::NonPositiveT1(t1));
            }
        }
        if self.cnot_error_multiplier.is_nan() || self.cnot_error_multiplier < 0.0 {
            return Err(NoiseError::NegativeMultiplier(self.cnot_error_multiplier));
        }
        for arity in [1, 2] {
            let pauli = 3.0 * self.pauli_prob(arity);
            if pauli > 1.0 {
                return Err(NoiseError::CombinedProbability("pauli", pauli));
            }
            let lambda = self.depolarizing_lambda(arity);
            if lambda > 1.0 {
                return Err(NoiseError::CombinedProbability("depolarizing", lambda));
            }
        }
        if !self.durations.is_valid() {
            return Err(NoiseError::Durations);
        }
        Ok(())
    }

    fn scale(&self, arity: usize) -> f64 {
        if arity == 2 {
            self.cnot_error_multiplier
        } else {
            1.0
        }
    }

    /// Per-axis Pauli probability on each qubit of a gate of the given arity.
    pub fn pauli_prob(&self, arity: usize) -> f64 {
        self.pauli_prob_per_axis_1q * self.scale(arity)
    }

    /// Depolarizing strength λ for a gate of the given arity.
    pub fn depolarizing_lambda(&self, arity: usize) -> f64 {
        self.depolarizing_lambda_1q * self.scale(arity)
    }

    /// Probability that the depolarizing channel applies a non-identity Pauli.
    pub fn depolarizing_fire_prob(&self, arity: usize) -> f64 {
        let d = 4f64.powi(arity as i32);
        self.depolarizing_lambda(arity) * (d - 1.0) / d
    }

    /// Probability that a qubit relaxes during `duration` timesteps.
    pub fn relax_prob(&self, duration: u64) -> f64 {
        match self.t1 {
            Some(t1) if duration > 0 => -(-(duration as f64) / t1).exp_m1(),
            _ => 0.0,
        }
    }

    pub fn has_gate_noise(&self) -> bool {
        self.pauli_prob_per_axis_1q > 0.0 || self.depolarizing_lambda_1q > 0.0
    }

    pub fn has_thermal_noise(&self) -> bool {
        self.t1.is_some()
    }
}
