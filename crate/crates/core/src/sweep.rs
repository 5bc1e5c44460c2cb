//! Batches of spectroscopy jobs over a θ grid, with per-(algorithm, n)
//! regressions of the estimate on the true trace.

use std::io;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sim::NoiseProfile;
use crate::spectroscopy::{thetas_for_even_traces, Algorithm, SpectroscopyError, SpectroscopyJob};
use crate::stats::fit_line;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub algorithms: Vec<Algorithm>,
    pub ns: Vec<usize>,
    /// Number of θ values per n when `thetas` is `None`.
    pub states: usize,
    /// Fixed θ values used for every n instead of the even-trace grid.
    pub thetas: Option<Vec<f64>>,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseProfile,
}

impl SweepConfig {
    pub fn new(algorithms: Vec<Algorithm>, ns: Vec<usize>, noise: NoiseProfile) -> Self {
        SweepConfig {
            algorithms,
            ns,
            states: 20,
            thetas: None,
            shots: 100_000,
            seed: 0,
            noise,
        }
    }

    fn grid(&self, n: usize) -> Vec<f64> {
        match &self.thetas {
            Some(t) => t.clone(),
            None => thetas_for_even_traces(n as u32, self.states),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub theta: f64,
    pub true_trace: f64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub regressions: Vec<RegressionRow>,
}

impl SweepResult {
    pub fn regression(&self, algorithm: Algorithm, n: usize) -> Option<&RegressionRow> {
        self.regressions
            .iter()
            .find(|r| r.algorithm == algorithm && r.n == n)
    }
}

/// Seed of one job, derived from the master seed and the job's position in
/// the (algorithm, n, θ index) grid.
pub fn job_seed(master: u64, algorithm: Algorithm, n: usize, theta_index: usize) -> u64 {
    let alg = Algorithm::ALL
        .iter()
        .position(|a| *a == algorithm)
        .expect("known algorithm") as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream((alg << 48) | ((n as u64) << 24) | theta_index as u64);
    rng.next_u64()
}

/// Runs every job in parallel; rows come back ordered by algorithm, n and θ
/// index whatever the scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult, SpectroscopyError> {
    let mut jobs = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &n in &cfg.ns {
            for (i, theta) in cfg.grid(n).into_iter().enumerate() {
                let seed = job_seed(cfg.seed, algorithm, n, i);
                jobs.push(SpectroscopyJob::theta(algorithm, n, theta, cfg.shots, seed)?);
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|job| {
            let rec = job.run(&cfg.noise)?;
            Ok(SweepRow {
                algorithm: job.algorithm,
                n: job.n,
                k: job.k(),
                theta: job.theta.expect("θ job"),
                true_trace: job.true_trace(),
                estimate: rec.value,
                ci_low: rec.ci_low,
                ci_high: rec.ci_high,
            })
        })
        .collect::<Result<Vec<_>, SpectroscopyError>>()?;
    let mut regressions = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &n in &cfg.ns {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.algorithm == algorithm && r.n == n)
                .map(|r| (r.true_trace, r.estimate))
                .unzip();
            if let Some(fit) = fit_line(&xs, &ys) {
                regressions.push(RegressionRow {
                    algorithm,
                    n,
                    slope: fit.slope,
                    intercept: fit.intercept,
                    slope_stderr: fit.slope_stderr(),
                });
            }
        }
    }
    Ok(SweepResult { rows, regressions })
}

fn write_rows<W: io::Write, T: Serialize>(rows: &[T], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `algorithm,n,k,theta,true_trace,estimate,ci_low,ci_high`.
pub fn write_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    write_rows(rows, out)
}

/// Columns `algorithm,n,slope,intercept,slope_stderr`.
pub fn write_regression_csv<W: io::Write>(rows: &[RegressionRow], out: W) -> csv::Result<()> {
    write_rows(rows, out)
}
