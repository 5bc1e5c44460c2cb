//! Circuits estimating Tr(ρ_A^n), their post-processing, and spectrum
//! reconstruction.
//!
//! Every builder returns a scheduled, idle-padded [`Circuit`]. Copy
//! preparations are scheduled as late as their first use allows.

mod estimate;
pub(crate) mod ht;
mod newton;
mod prep;
mod tct;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{pad_idle, schedule_asap, Circuit, DurationTable, GateKind, Program};
use crate::sim::{self, NoiseProfile, SimError};

pub use estimate::{
    estimate_bell_overlap, estimate_ht, estimate_tct, hoeffding_halfwidth, BitMap, SpectroscopyEstimate,
};
pub use ht::Shift;
pub use newton::{elementary_symmetric, newton_girard, power_sums, Spectrum};
pub use prep::{thetas_for_even_traces, trace_oracle, StatePrep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectroscopyError {
    #[error("n must be at least 2, got {0}")]
    InvalidN(usize),
    #[error("k must be at least 1, got {0}")]
    InvalidK(usize),
    #[error("theta must lie in [0, π], got {0}")]
    InvalidTheta(f64),
    #[error("invalid state preparation: {0}")]
    InvalidPrep(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("counts have {got} bits, expected {expected}")]
    CountsWidth { expected: usize, got: usize },
    #[error("no shots recorded")]
    EmptyCounts,
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// The six estimation circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "ht")]
    Ht,
    #[serde(rename = "qe-ht-4k")]
    QeHt4k,
    #[serde(rename = "qe-ht-3k")]
    QeHt3k,
    #[serde(rename = "tct")]
    Tct,
    #[serde(rename = "qe-tct-6k")]
    QeTct6k,
    #[serde(rename = "qe-tct-4k")]
    QeTct4k,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    HadamardTest,
    TwoCopyTest,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Ht,
        Algorithm::QeHt4k,
        Algorithm::QeHt3k,
        Algorithm::Tct,
        Algorithm::QeTct6k,
        Algorithm::QeTct4k,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Ht => "ht",
            Algorithm::QeHt4k => "qe-ht-4k",
            Algorithm::QeHt3k => "qe-ht-3k",
            Algorithm::Tct => "tct",
            Algorithm::QeTct6k => "qe-tct-6k",
            Algorithm::QeTct4k => "qe-tct-4k",
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Algorithm::Ht | Algorithm::QeHt4k | Algorithm::QeHt3k => Family::HadamardTest,
            _ => Family::TwoCopyTest,
        }
    }

    /// Circuit width for `n` copies of a `2k`-qubit state.
    pub fn width(&self, n: usize, k: usize) -> usize {
        match self {
            Algorithm::Ht => 2 * k * n + 1,
            Algorithm::QeHt4k => 4 * k + 1,
            Algorithm::QeHt3k => 3 * k + 1,
            Algorithm::Tct => 4 * k * n,
            Algorithm::QeTct6k => 6 * k,
            Algorithm::QeTct4k => 4 * k,
        }
    }

    /// Unscheduled operation list.
    pub fn program(&self, n: usize, prep: &StatePrep) -> Result<Program, SpectroscopyError> {
        if n < 2 {
            return Err(SpectroscopyError::InvalidN(n));
        }
        Ok(match self {
            Algorithm::Ht => ht::ht_program(n, prep, Shift::Right),
            Algorithm::QeHt4k => ht::qe_ht_4k_program(n, prep, None),
            Algorithm::QeHt3k => ht::qe_ht_3k_program(n, prep, None),
            Algorithm::Tct => tct::tct_program(n, prep),
            Algorithm::QeTct6k => tct::qe_tct_6k_program(n, prep),
            Algorithm::QeTct4k => tct::qe_tct_4k_program(n, prep),
        })
    }

    /// Scheduled and padded circuit under `durations`.
    pub fn build_with(
        &self,
        n: usize,
        prep: &StatePrep,
        durations: &DurationTable,
    ) -> Result<Circuit, SpectroscopyError> {
        finish(&self.program(n, prep)?, durations)
    }

    /// Scheduled and padded circuit under the default durations.
    pub fn build(&self, n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
        self.build_with(n, prep, &DurationTable::default())
    }

    /// Turns counts from this algorithm's circuit into an estimate.
    pub fn estimate(
        &self,
        counts: &sim::Counts,
        n: usize,
        k: usize,
    ) -> Result<SpectroscopyEstimate, SpectroscopyError> {
        match self.family() {
            Family::HadamardTest => estimate_ht(counts),
            Family::TwoCopyTest => estimate_tct(counts, &BitMap::new(n, k)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = SpectroscopyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| SpectroscopyError::UnknownAlgorithm(s.to_string()))
    }
}

pub(crate) fn finish(program: &Program, durations: &DurationTable) -> Result<Circuit, SpectroscopyError> {
    let c = schedule_asap(program, durations).map_err(|e| SpectroscopyError::InvalidPrep(e.to_string()))?;
    Ok(pad_idle(&c))
}

/// Discarded measurement into a fresh classical bit, then reset.
pub(crate) fn measure_and_reset(p: &mut Program, q: usize) {
    let bit = p.num_clbits();
    p.ensure_clbits(bit + 1);
    p.push_discarded_measure(q, bit).expect("fresh bit");
    p.add(GateKind::Reset, &[q]);
}

pub fn build_ht(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    Algorithm::Ht.build(n, prep)
}

/// HT with an explicit decomposition of the cyclic shift.
pub fn build_ht_shifted(n: usize, prep: &StatePrep, shift: Shift) -> Result<Circuit, SpectroscopyError> {
    if n < 2 {
        return Err(SpectroscopyError::InvalidN(n));
    }
    finish(&ht::ht_program(n, prep, shift), &DurationTable::default())
}

pub fn build_qe_ht_4k(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    Algorithm::QeHt4k.build(n, prep)
}

pub fn build_qe_ht_3k(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    Algorithm::QeHt3k.build(n, prep)
}

/// A qubit-efficient HT circuit for `n` copies cut short after `blocks`
/// controlled-swap blocks, followed by the ancilla X measurement.
pub fn build_qe_ht_prefix(
    algorithm: Algorithm,
    n: usize,
    prep: &StatePrep,
    blocks: usize,
) -> Result<Circuit, SpectroscopyError> {
    if n < 2 {
        return Err(SpectroscopyError::InvalidN(n));
    }
    let blocks = Some(blocks.min(n - 1));
    let p = match algorithm {
        Algorithm::QeHt4k => ht::qe_ht_4k_program(n, prep, blocks),
        Algorithm::QeHt3k => ht::qe_ht_3k_program(n, prep, blocks),
        other => {
            return Err(SpectroscopyError::UnknownAlgorithm(format!(
                "{other} has no prefix form"
            )))
        }
    };
    finish(&p, &DurationTable::default())
}

pub fn build_tct(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    Algorithm::Tct.build(n, prep)
}

pub fn build_qe_tct_6k(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    Algorithm::QeTct6k.build(n, prep)
}

pub fn build_qe_tct_4k(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    Algorithm::QeTct4k.build(n, prep)
}

/// One estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectroscopyJob {
    pub algorithm: Algorithm,
    pub n: usize,
    /// Angle of the θ family, recorded for reporting. `None` for custom preparations.
    pub theta: Option<f64>,
    pub prep: StatePrep,
    pub shots: u64,
    pub seed: u64,
}

impl SpectroscopyJob {
    /// A job over the θ family (k = 1).
    pub fn theta(
        algorithm: Algorithm,
        n: usize,
        theta: f64,
        shots: u64,
        seed: u64,
    ) -> Result<Self, SpectroscopyError> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(SpectroscopyError::InvalidTheta(theta));
        }
        if n < 2 {
            return Err(SpectroscopyError::InvalidN(n));
        }
        Ok(SpectroscopyJob {
            algorithm,
            n,
            theta: Some(theta),
            prep: StatePrep::theta(theta),
            shots,
            seed,
        })
    }

    pub fn k(&self) -> usize {
        self.prep.k()
    }

    /// Exact Tr(ρ_A^n) of the prepared state.
    pub fn true_trace(&self) -> f64 {
        self.prep.trace_power(self.n as u32)
    }

    pub fn run(&self, noise: &NoiseProfile) -> Result<EstimateRecord, SpectroscopyError> {
        let circuit = self.algorithm.build_with(self.n, &self.prep, &noise.durations)?;
        let counts = sim::run(&circuit, noise, self.shots, self.seed)?;
        let est = self.algorithm.estimate(&counts, self.n, self.k())?;
        Ok(EstimateRecord {
            algorithm: self.algorithm,
            k: self.k(),
            n: self.n,
            theta: self.theta,
            shots: self.shots,
            value: est.value,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            raw: est.raw,
        })
    }
}

/// Serializable result of a [`SpectroscopyJob`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub algorithm: Algorithm,
    pub k: usize,
    pub n: usize,
    pub theta: Option<f64>,
    pub shots: u64,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub raw: f64,
}
