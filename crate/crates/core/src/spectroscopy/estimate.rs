use serde::{Deserialize, Serialize};

use super::SpectroscopyError;
use crate::sim::Counts;

/// Canonical classical-bit layout of the two-copy-test family:
/// bit `((2i + primed)·2 + subsystem)·k + pos` holds qubit `pos` of subsystem
/// A (0) or B (1) of copy `i`, primed or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitMap {
    n: usize,
    k: usize,
}

impl BitMap {
    pub fn new(n: usize, k: usize) -> Self {
        BitMap { n, k }
    }

    pub fn width(&self) -> usize {
        4 * self.k * self.n
    }

    pub fn bit(&self, copy: usize, primed: bool, subsystem: usize, pos: usize) -> usize {
        debug_assert!(copy < self.n && subsystem < 2 && pos < self.k);
        ((2 * copy + primed as usize) * 2 + subsystem) * self.k + pos
    }

    /// Bit pairs whose product enters the parity: `(A_ℓ, A'_{ℓ−1})` and `(B_ℓ, B'_ℓ)`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.k * self.n);
        for l in 0..self.n {
            let prev = (l + self.n - 1) % self.n;
            for pos in 0..self.k {
                out.push((self.bit(l, false, 0, pos), self.bit(prev, true, 0, pos)));
                out.push((self.bit(l, false, 1, pos), self.bit(l, true, 1, pos)));
            }
        }
        out
    }
}

/// An estimate of Tr(ρ_A^n) with its statistical interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectroscopyEstimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `p0 − p1` for the Hadamard-test family, mean parity for the two-copy family.
    pub raw: f64,
    /// Half-width of the interval on `raw`.
    pub halfwidth: f64,
}

/// Hoeffding half-width at 84% one-sided confidence per side for a ±1
/// statistic averaged over `shots` samples.
pub fn hoeffding_halfwidth(shots: u64) -> f64 {
    2.0 * (-(0.16f64).ln() / (2.0 * shots as f64)).sqrt()
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Hadamard-test estimate from counts over the single ancilla bit.
pub fn estimate_ht(counts: &Counts) -> Result<SpectroscopyEstimate, SpectroscopyError> {
    if counts.width() != 1 {
        return Err(SpectroscopyError::CountsWidth {
            expected: 1,
            got: counts.width(),
        });
    }
    let s = counts.shots();
    if s == 0 {
        return Err(SpectroscopyError::EmptyCounts);
    }
    let raw = (counts.get("0") as f64 - counts.get("1") as f64) / s as f64;
    let hw = hoeffding_halfwidth(s);
    Ok(SpectroscopyEstimate {
        value: clamp01(raw),
        ci_low: clamp01(raw - hw),
        ci_high: clamp01(raw + hw),
        raw,
        halfwidth: hw,
    })
}

fn mean_parity(counts: &Counts, pairs: &[(usize, usize)]) -> f64 {
    let mut acc: i64 = 0;
    for (outcome, times) in counts.iter() {
        let odd = pairs
            .iter()
            .fold(false, |p, &(x, y)| p ^ (outcome.get(x) & outcome.get(y)));
        acc += if odd { -(times as i64) } else { times as i64 };
    }
    acc as f64 / counts.shots() as f64
}

/// Overlap Tr(ρσ) from Bell-basis counts on `2m` bits: bits `0..m` are the
/// control-side results `r`, bits `m..2m` the target-side results `s`.
pub fn estimate_bell_overlap(counts: &Counts, m: usize) -> Result<f64, SpectroscopyError> {
    if counts.width() != 2 * m {
        return Err(SpectroscopyError::CountsWidth {
            expected: 2 * m,
            got: counts.width(),
        });
    }
    if counts.shots() == 0 {
        return Err(SpectroscopyError::EmptyCounts);
    }
    let pairs: Vec<_> = (0..m).map(|j| (j, m + j)).collect();
    Ok(mean_parity(counts, &pairs))
}

/// Two-copy-test estimate from counts laid out by `map`.
pub fn estimate_tct(counts: &Counts, map: &BitMap) -> Result<SpectroscopyEstimate, SpectroscopyError> {
    if counts.width() != map.width() {
        return Err(SpectroscopyError::CountsWidth {
            expected: map.width(),
            got: counts.width(),
        });
    }
    if counts.shots() == 0 {
        return Err(SpectroscopyError::EmptyCounts);
    }
    let raw = mean_parity(counts, &map.pairs());
    let hw = hoeffding_halfwidth(counts.shots());
    let root = |x: f64| x.max(0.0).sqrt().min(1.0);
    Ok(SpectroscopyEstimate {
        value: root(raw),
        ci_low: root(raw - hw),
        ci_high: root(raw + hw),
        raw,
        halfwidth: hw,
    })
}
