//! Hadamard-test circuits: the full-width version and the two register-reusing
//! variants.

use super::{measure_and_reset, StatePrep};
use crate::circuit::{cswap_decomposed, GateKind, Program};

/// Decomposition of the cyclic shift of the A registers into transpositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shift {
    /// Transpositions (1 2), (1 3), …, (1 n) in that order.
    #[default]
    Right,
    /// The same transpositions in reverse order, giving the inverse cycle.
    Left,
}

pub(crate) fn cswap_block(p: &mut Program, anc: usize, a: &[usize], b: &[usize]) {
    for (&x, &y) in a.iter().zip(b) {
        for op in cswap_decomposed(anc, x, y).expect("distinct registers") {
            p.add(op.kind, &op.qubits);
        }
    }
}

pub(crate) fn range(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

fn finish(p: &mut Program, anc: usize) {
    p.add(GateKind::H, &[anc]);
    p.add(GateKind::Measure(0), &[anc]);
}

/// Width `2kn + 1`: ancilla 0, then copy `i` with A at `1 + 2ki` and B right after.
pub(crate) fn ht_program(n: usize, prep: &StatePrep, shift: Shift) -> Program {
    let k = prep.k();
    let mut p = Program::new(2 * k * n + 1, 1);
    let a = |i: usize| range(1 + 2 * k * i, k);
    let b = |i: usize| range(1 + 2 * k * i + k, k);
    p.add_lazy(GateKind::H, &[0]);
    for i in 0..n {
        prep.emit(&mut p, &a(i), &b(i));
    }
    let mut partners: Vec<usize> = (1..n).collect();
    if shift == Shift::Left {
        partners.reverse();
    }
    for j in partners {
        cswap_block(&mut p, 0, &a(0), &a(j));
    }
    finish(&mut p, 0);
    p
}

/// Width `4k + 1`: ancilla plus two `2k` registers; the second is measured,
/// reset and re-prepared for every copy after the second.
///
/// `blocks` stops the construction after that many controlled-swap blocks,
/// before the final Hadamard.
pub(crate) fn qe_ht_4k_program(n: usize, prep: &StatePrep, blocks: Option<usize>) -> Program {
    let k = prep.k();
    let mut p = Program::new(4 * k + 1, 1);
    let (r1a, r1b) = (range(1, k), range(1 + k, k));
    let (r2a, r2b) = (range(1 + 2 * k, k), range(1 + 3 * k, k));
    let limit = blocks.unwrap_or(n - 1);
    p.add_lazy(GateKind::H, &[0]);
    prep.emit(&mut p, &r1a, &r1b);
    prep.emit(&mut p, &r2a, &r2b);
    for block in 0..limit {
        if block > 0 {
            for &q in r2a.iter().chain(&r2b) {
                measure_and_reset(&mut p, q);
            }
            prep.emit(&mut p, &r2a, &r2b);
        }
        cswap_block(&mut p, 0, &r1a, &r2a);
    }
    finish(&mut p, 0);
    p
}

/// Width `3k + 1`: registers X, Y, Z of k qubits. The first copy keeps only
/// its A half (on X); later copies are prepared on (Y, Z).
pub(crate) fn qe_ht_3k_program(n: usize, prep: &StatePrep, blocks: Option<usize>) -> Program {
    let k = prep.k();
    let mut p = Program::new(3 * k + 1, 1);
    let (x, y, z) = (range(1, k), range(1 + k, k), range(1 + 2 * k, k));
    let limit = blocks.unwrap_or(n - 1);
    p.add_lazy(GateKind::H, &[0]);
    prep.emit(&mut p, &x, &y);
    for &q in &y {
        measure_and_reset(&mut p, q);
    }
    prep.emit(&mut p, &y, &z);
    for block in 0..limit {
        if block > 0 {
            for &q in y.iter().chain(&z) {
                measure_and_reset(&mut p, q);
            }
            prep.emit(&mut p, &y, &z);
        }
        cswap_block(&mut p, 0, &x, &y);
    }
    finish(&mut p, 0);
    p
}
