//! Circuit intermediate representation.
//!
//! A [`Program`] is an unscheduled list of [`Operation`]s. Scheduling it with
//! [`schedule_asap`] produces a [`Circuit`] whose [`Instruction`]s carry
//! integer start times and durations. [`pad_idle`] then tiles every idle gap
//! with flagged identity instructions so thermal noise can be applied to
//! waiting qubits.
//!
//! Conventions: CNOT lists its control first, and qubit 0 is the most
//! significant position of a basis-state label.

mod cswap;
pub mod dense;
mod gate;
mod schedule;
pub mod text;

use std::collections::BTreeSet;

use thiserror::Error;

pub use cswap::{cswap_decomposed, swap_decomposed};
pub use gate::{u1, u2, DurationTable, GateKind, Mat2};
pub(crate) use gate::{PAULI_X, PAULI_Y, PAULI_Z};
pub use schedule::{defer_lazy, pad_idle, schedule_asap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("classical bit {bit} out of range ({num_clbits} bits)")]
    ClbitOutOfRange { bit: usize, num_clbits: usize },
    #[error("{kind} acts on {got} qubits, expected {expected}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("instruction uses qubit {0} more than once")]
    RepeatedQubit(usize),
    #[error("classical bit {0} is written by more than one measurement")]
    DuplicateClbit(usize),
    #[error("instructions overlap in time on qubit {qubit} at t={time}")]
    Overlap { qubit: usize, time: u64 },
    #[error("invalid duration table: all durations must be positive")]
    InvalidDurations,
    #[error("instruction duration {got} does not match the duration table ({expected}) for {kind}")]
    DurationMismatch {
        kind: &'static str,
        expected: u64,
        got: u64,
    },
}

/// An unscheduled operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Scheduled as late as its consumers allow rather than as soon as possible.
    pub lazy: bool,
}

impl Operation {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        Operation {
            kind,
            qubits,
            lazy: false,
        }
    }

    pub fn lazy(mut self) -> Self {
        self.lazy = true;
        self
    }
}

fn check_operands(kind: &GateKind, qubits: &[usize], num_qubits: usize) -> Result<(), CircuitError> {
    if qubits.len() != kind.arity() {
        return Err(CircuitError::Arity {
            kind: kind.mnemonic(),
            expected: kind.arity(),
            got: qubits.len(),
        });
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= num_qubits {
            return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(CircuitError::RepeatedQubit(q));
        }
    }
    Ok(())
}

/// A validated, unscheduled operation list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    num_qubits: usize,
    num_clbits: usize,
    ops: Vec<Operation>,
    discarded: BTreeSet<usize>,
}

impl Program {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Program {
            num_qubits,
            num_clbits,
            ops: Vec::new(),
            discarded: BTreeSet::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    /// Classical bits written by measurements whose result is kept only for bookkeeping.
    pub fn discarded(&self) -> &BTreeSet<usize> {
        &self.discarded
    }

    /// Grows the classical register so that `bit` is addressable.
    pub fn ensure_clbits(&mut self, count: usize) {
        self.num_clbits = self.num_clbits.max(count);
    }

    pub fn push(&mut self, op: Operation) -> Result<(), CircuitError> {
        check_operands(&op.kind, &op.qubits, self.num_qubits)?;
        if let GateKind::Measure(bit) = op.kind {
            if bit >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange {
                    bit,
                    num_clbits: self.num_clbits,
                });
            }
            let taken = self
                .ops
                .iter()
                .any(|o| matches!(o.kind, GateKind::Measure(b) if b == bit));
            if taken {
                return Err(CircuitError::DuplicateClbit(bit));
            }
        }
        self.ops.push(op);
        Ok(())
    }

    /// Push helper for builders whose operands are correct by construction.
    pub(crate) fn add(&mut self, kind: GateKind, qubits: &[usize]) {
        self.push(Operation::new(kind, qubits.to_vec()))
            .expect("builder emitted an invalid operation");
    }

    pub(crate) fn add_lazy(&mut self, kind: GateKind, qubits: &[usize]) {
        self.push(Operation::new(kind, qubits.to_vec()).lazy())
            .expect("builder emitted an invalid operation");
    }

    /// Measure into `bit` and flag the result as discardable.
    pub fn push_discarded_measure(&mut self, qubit: usize, bit: usize) -> Result<(), CircuitError> {
        self.push(Operation::new(GateKind::Measure(bit), vec![qubit]))?;
        self.discarded.insert(bit);
        Ok(())
    }

    pub(crate) fn mark_discarded(&mut self, bit: usize) {
        self.discarded.insert(bit);
    }
}

/// A scheduled operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub start: u64,
    pub duration: u64,
    /// Identity inserted by [`pad_idle`]; receives thermal noise only.
    pub padding: bool,
    pub lazy: bool,
}

impl Instruction {
    pub fn end(&self) -> u64 {
        self.start + self.duration
    }

    /// Whether gate (Pauli and depolarizing) noise applies to this instruction.
    pub fn takes_gate_noise(&self) -> bool {
        self.kind.is_unitary() && self.kind != GateKind::Identity && !self.padding
    }
}

/// A scheduled circuit. Instructions are kept sorted by start time; ties keep
/// program order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    instructions: Vec<Instruction>,
    discarded: BTreeSet<usize>,
}

impl Circuit {
    /// Builds a circuit from already-timed instructions, checking every invariant.
    pub fn from_instructions(
        num_qubits: usize,
        num_clbits: usize,
        mut instructions: Vec<Instruction>,
        discarded: BTreeSet<usize>,
        durations: &DurationTable,
    ) -> Result<Self, CircuitError> {
        if !durations.is_valid() {
            return Err(CircuitError::InvalidDurations);
        }
        let mut seen_bits = BTreeSet::new();
        for ins in &instructions {
            check_operands(&ins.kind, &ins.qubits, num_qubits)?;
            let expected = durations.duration(&ins.kind);
            if ins.duration != expected {
                return Err(CircuitError::DurationMismatch {
                    kind: ins.kind.mnemonic(),
                    expected,
                    got: ins.duration,
                });
            }
            if let GateKind::Measure(bit) = ins.kind {
                if bit >= num_clbits {
                    return Err(CircuitError::ClbitOutOfRange { bit, num_clbits });
                }
                if !seen_bits.insert(bit) {
                    return Err(CircuitError::DuplicateClbit(bit));
                }
            }
        }
        instructions.sort_by_key(|i| i.start);
        let circuit = Circuit {
            num_qubits,
            num_clbits,
            instructions,
            discarded,
        };
        circuit.check_overlap()?;
        Ok(circuit)
    }

    pub(crate) fn from_sorted_unchecked(
        num_qubits: usize,
        num_clbits: usize,
        instructions: Vec<Instruction>,
        discarded: BTreeSet<usize>,
    ) -> Self {
        debug_assert!(instructions.windows(2).all(|w| w[0].start <= w[1].start));
        Circuit {
            num_qubits,
            num_clbits,
            instructions,
            discarded,
        }
    }

    fn check_overlap(&self) -> Result<(), CircuitError> {
        for (qubit, idx) in self.qubit_timelines().into_iter().enumerate() {
            for w in idx.windows(2) {
                let (a, b) = (&self.instructions[w[0]], &self.instructions[w[1]]);
                if b.start < a.end() {
                    return Err(CircuitError::Overlap { qubit, time: b.start });
                }
            }
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn discarded(&self) -> &BTreeSet<usize> {
        &self.discarded
    }

    /// Classical bits that make it into aggregated counts, ascending.
    pub fn recorded_bits(&self) -> Vec<usize> {
        (0..self.num_clbits)
            .filter(|b| !self.discarded.contains(b))
            .collect()
    }

    /// Circuit width: the number of qubits.
    pub fn width(&self) -> usize {
        self.num_qubits
    }

    /// Time at which the last instruction finishes.
    pub fn makespan(&self) -> u64 {
        self.instructions.iter().map(Instruction::end).max().unwrap_or(0)
    }

    /// For every qubit, the indices of the instructions touching it, in time order.
    pub fn qubit_timelines(&self) -> Vec<Vec<usize>> {
        let mut lines = vec![Vec::new(); self.num_qubits];
        for (i, ins) in self.instructions.iter().enumerate() {
            for &q in &ins.qubits {
                lines[q].push(i);
            }
        }
        for line in &mut lines {
            line.sort_by_key(|&i| self.instructions[i].start);
        }
        lines
    }

    /// Count of each non-padding kind, keyed by mnemonic.
    pub fn gate_counts(&self) -> std::collections::BTreeMap<&'static str, usize> {
        let mut counts = std::collections::BTreeMap::new();
        for ins in self.instructions.iter().filter(|i| !i.padding) {
            *counts.entry(ins.kind.mnemonic()).or_insert(0) += 1;
        }
        counts
    }

    /// Back to an unscheduled program in time order.
    pub fn to_program(&self) -> Program {
        Program {
            num_qubits: self.num_qubits,
            num_clbits: self.num_clbits,
            ops: self
                .instructions
                .iter()
                .map(|i| Operation {
                    kind: i.kind,
                    qubits: i.qubits.clone(),
                    lazy: i.lazy,
                })
                .collect(),
            discarded: self.discarded.clone(),
        }
    }

    /// First gap found in a qubit's timeline, as `(qubit, gap_start, gap_end)`.
    pub fn first_gap(&self) -> Option<(usize, u64, u64)> {
        for (q, line) in self.qubit_timelines().into_iter().enumerate() {
            for w in line.windows(2) {
                let end = self.instructions[w[0]].end();
                let next = self.instructions[w[1]].start;
                if next > end {
                    return Some((q, end, next));
                }
            }
        }
        None
    }
}
