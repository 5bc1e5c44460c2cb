use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SpectroscopyError;
use crate::circuit::{dense, schedule_asap, DurationTable, GateKind, Operation, Program};

/// A state-preparation subcircuit on `2k` local qubits: `0..k` is subsystem
/// A and `k..2k` is subsystem B.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePrep {
    k: usize,
    ops: Vec<Operation>,
}

impl StatePrep {
    /// The one-parameter two-qubit family: H on A, U2(θ−π/2, π/2) on B,
    /// then CNOT from A to B.
    pub fn theta(theta: f64) -> Self {
        StatePrep {
            k: 1,
            ops: vec![
                Operation::new(GateKind::H, vec![0]),
                Operation::new(GateKind::U2(theta - FRAC_PI_2, FRAC_PI_2), vec![1]),
                Operation::new(GateKind::Cnot, vec![0, 1]),
            ],
        }
    }

    /// `k` independent copies of the θ pair: A qubit `j` is entangled with B
    /// qubit `k + j`, so Tr(ρ_A^n) is the k-th power of the k = 1 value.
    pub fn theta_product(theta: f64, k: usize) -> Result<Self, SpectroscopyError> {
        if k == 0 {
            return Err(SpectroscopyError::InvalidK(k));
        }
        let base = StatePrep::theta(theta);
        let mut ops = Vec::with_capacity(3 * k);
        for j in 0..k {
            for op in base.ops() {
                let q = op
                    .qubits
                    .iter()
                    .map(|&x| if x == 0 { j } else { k + j })
                    .collect();
                ops.push(Operation::new(op.kind, q));
            }
        }
        Ok(StatePrep { k, ops })
    }

    /// A user-supplied unitary subcircuit over local qubits `0..2k`.
    pub fn custom(k: usize, ops: Vec<Operation>) -> Result<Self, SpectroscopyError> {
        if k == 0 {
            return Err(SpectroscopyError::InvalidK(k));
        }
        let mut check = Program::new(2 * k, 0);
        for op in &ops {
            if !op.kind.is_unitary() {
                return Err(SpectroscopyError::InvalidPrep(format!(
                    "`{}` is not unitary",
                    op.kind.mnemonic()
                )));
            }
            check
                .push(op.clone())
                .map_err(|e| SpectroscopyError::InvalidPrep(e.to_string()))?;
        }
        Ok(StatePrep { k, ops })
    }

    /// Builds a custom preparation from a parsed circuit file.
    pub fn from_program(program: &Program) -> Result<Self, SpectroscopyError> {
        let q = program.num_qubits();
        if q == 0 || !q.is_multiple_of(2) {
            return Err(SpectroscopyError::InvalidPrep(format!(
                "preparation must act on an even number of qubits, found {q}"
            )));
        }
        Self::custom(q / 2, program.ops().to_vec())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    /// A copy whose every qubit runs `extra` additional rounds of `U1(0)`
    /// after the preparation, lengthening the makespan by `extra` steps.
    pub fn lengthened(&self, extra: usize) -> Self {
        let mut ops = self.ops.clone();
        for _ in 0..extra {
            for q in 0..2 * self.k {
                ops.push(Operation::new(GateKind::U1(0.0), vec![q]));
            }
        }
        StatePrep { k: self.k, ops }
    }

    /// Scheduled makespan of the subcircuit on its own.
    pub fn makespan(&self, durations: &DurationTable) -> u64 {
        let mut p = Program::new(2 * self.k, 0);
        for op in &self.ops {
            p.push(op.clone()).expect("validated on construction");
        }
        schedule_asap(&p, durations)
            .expect("validated on construction")
            .makespan()
    }

    /// Emits the preparation onto `a` (k qubits) and `b` (k qubits) as lazy ops.
    pub(crate) fn emit(&self, program: &mut Program, a: &[usize], b: &[usize]) {
        debug_assert_eq!((a.len(), b.len()), (self.k, self.k));
        let map = |q: usize| if q < self.k { a[q] } else { b[q - self.k] };
        for op in &self.ops {
            let qubits: Vec<usize> = op.qubits.iter().map(|&q| map(q)).collect();
            program.add_lazy(op.kind, &qubits);
        }
    }

    /// The prepared `2k`-qubit state, qubit 0 (first A qubit) most significant.
    pub fn statevector(&self) -> Vec<Complex64> {
        let n = 2 * self.k;
        let mut s = dense::zero_state(n);
        dense::apply_ops(&mut s, n, &self.ops);
        s
    }

    /// Reduced density matrix of subsystem A.
    pub fn reduced_a(&self) -> DMatrix<Complex64> {
        let s = self.statevector();
        let dim = 1usize << self.k;
        DMatrix::from_fn(dim, dim, |i, j| {
            (0..dim).map(|b| s[i * dim + b] * s[j * dim + b].conj()).sum()
        })
    }

    /// Eigenvalues of ρ_A, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .reduced_a()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|&v| v.max(0.0))
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Exact Tr(ρ_A^n).
    pub fn trace_power(&self, n: u32) -> f64 {
        self.spectrum().iter().map(|l| l.powi(n as i32)).sum()
    }
}

/// Exact Tr(ρ_A^n) for the θ family.
pub fn trace_oracle(theta: f64, n: u32) -> f64 {
    StatePrep::theta(theta).trace_power(n)
}

/// `count` angles in [0, π/2] whose traces are evenly spaced from `2^{1−n}`
/// (θ = 0, maximally entangled) to 1 (θ = π/2, product state).
pub fn thetas_for_even_traces(n: u32, count: usize) -> Vec<f64> {
    assert!(count >= 2, "need at least two states");
    let lo = 2f64.powi(1 - n as i32);
    (0..count)
        .map(|i| {
            if i == 0 {
                return 0.0;
            }
            if i == count - 1 {
                return FRAC_PI_2;
            }
            let target = lo + (1.0 - lo) * i as f64 / (count - 1) as f64;
            let (mut a, mut b) = (0.0, FRAC_PI_2);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if trace_oracle(mid, n) < target {
                    a = mid;
                } else {
                    b = mid;
                }
                if b - a < 1e-15 {
                    break;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
