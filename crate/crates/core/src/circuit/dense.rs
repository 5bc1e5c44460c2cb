//! Full-width dense reference computations.
//!
//! These routines are deliberately naive: they keep every qubit in one
//! `2^n` vector, walk instructions in start order and branch exactly on
//! measurements. They serve as oracles for the trajectory simulator and the
//! gate decompositions.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Circuit, GateKind, Mat2, Operation};

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// `|0…0⟩` on `n` qubits.
pub fn zero_state(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

pub fn apply_1q(state: &mut [Complex64], n: usize, q: usize, m: &Mat2) {
    let mask = bit(n, q);
    for i in 0..state.len() {
        if i & mask == 0 {
            let (a, b) = (state[i], state[i | mask]);
            state[i] = m[0][0] * a + m[0][1] * b;
            state[i | mask] = m[1][0] * a + m[1][1] * b;
        }
    }
}

pub fn apply_cnot(state: &mut [Complex64], n: usize, control: usize, target: usize) {
    let (cm, tm) = (bit(n, control), bit(n, target));
    for i in 0..state.len() {
        if i & cm != 0 && i & tm == 0 {
            state.swap(i, i | tm);
        }
    }
}

/// Applies unitary operations in order. Panics on Measure or Reset.
pub fn apply_ops(state: &mut [Complex64], n: usize, ops: &[Operation]) {
    for op in ops {
        apply_unitary(state, n, &op.kind, &op.qubits);
    }
}

fn apply_unitary(state: &mut [Complex64], n: usize, kind: &GateKind, qubits: &[usize]) {
    match kind {
        GateKind::Cnot => apply_cnot(state, n, qubits[0], qubits[1]),
        k => apply_1q(
            state,
            n,
            qubits[0],
            &k.matrix().expect("dense oracle only applies unitary kinds"),
        ),
    }
}

/// The `2^n × 2^n` matrix of a unitary operation list.
pub fn unitary(n: usize, ops: &[Operation]) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[col] = Complex64::new(1.0, 0.0);
        apply_ops(&mut v, n, ops);
        for (row, amp) in v.into_iter().enumerate() {
            u[(row, col)] = amp;
        }
    }
    u
}

/// Reference CSWAP on three qubits with the control first.
pub fn cswap_matrix() -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(8, 8);
    for i in 0..8usize {
        let j = if i & 0b100 != 0 {
            0b100 | ((i & 1) << 1) | ((i >> 1) & 1)
        } else {
            i
        };
        m[(j, i)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Probability of each outcome of the recorded bits under noiseless
/// execution, keyed by the bit string (recorded bits ascending, left to right).
///
/// Cost grows with the number of measurement branches; intended for small
/// circuits only.
pub fn exact_distribution(circuit: &Circuit) -> BTreeMap<String, f64> {
    let n = circuit.num_qubits();
    struct Branch {
        prob: f64,
        state: Vec<Complex64>,
        bits: Vec<u8>,
    }
    let mut branches = vec![Branch {
        prob: 1.0,
        state: zero_state(n),
        bits: vec![0; circuit.num_clbits()],
    }];
    for ins in circuit.instructions() {
        match ins.kind {
            GateKind::Measure(_) | GateKind::Reset => {
                let q = ins.qubits[0];
                let mask = bit(n, q);
                let mut next = Vec::with_capacity(branches.len() * 2);
                for b in branches {
                    let p1: f64 = b
                        .state
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| i & mask != 0)
                        .map(|(_, a)| a.norm_sqr())
                        .sum();
                    for outcome in [0u8, 1] {
                        let p = if outcome == 1 { p1 } else { 1.0 - p1 };
                        if p < 1e-14 {
                            continue;
                        }
                        let scale = 1.0 / p.sqrt();
                        let mut state = vec![Complex64::new(0.0, 0.0); b.state.len()];
                        for (i, a) in b.state.iter().enumerate() {
                            if ((i & mask != 0) as u8) == outcome {
                                // Reset moves the surviving amplitude to |0⟩ on q.
                                let dst = if ins.kind == GateKind::Reset { i & !mask } else { i };
                                state[dst] = a * scale;
                            }
                        }
                        let mut bits = b.bits.clone();
                        if let GateKind::Measure(c) = ins.kind {
                            bits[c] = outcome;
                        }
                        next.push(Branch {
                            prob: b.prob * p,
                            state,
                            bits,
                        });
                    }
                }
                branches = next;
            }
            kind => {
                for b in &mut branches {
                    apply_unitary(&mut b.state, n, &kind, &ins.qubits);
                }
            }
        }
    }
    let recorded = circuit.recorded_bits();
    let mut dist = BTreeMap::new();
    for b in branches {
        let key: String = recorded
            .iter()
            .map(|&c| if b.bits[c] == 1 { '1' } else { '0' })
            .collect();
        *dist.entry(key).or_insert(0.0) += b.prob;
    }
    dist
}
