//! Two-copy-test circuits.
//!
//! The 2n copies form a ring `c_0, c_1, …, c_{2n-1}` with `c_{2i} = ψ_i` and
//! `c_{2i+1} = ψ'_i`. Edge `j` joins `c_j` and `c_{j+1 mod 2n}`: even edges
//! pair the B halves of `ψ_i` and `ψ'_i`, odd edges pair the A half of
//! `ψ_{i+1}` with the A half of `ψ'_i`. The primed copies therefore carry the
//! cyclic shift of the A subsystems. Each edge is a Bell-basis measurement:
//! CNOT from the unprimed qubit, H on it, then both qubits measured.
//!
//! All three builders walk this ring and differ only in the order copies are
//! prepared and in how k-qubit slots are recycled.

use std::collections::BTreeSet;

use super::{BitMap, StatePrep};
use crate::circuit::{GateKind, Program};

const A: usize = 0;
const B: usize = 1;

struct Ring<'a> {
    n: usize,
    k: usize,
    prep: &'a StatePrep,
    map: BitMap,
    program: Program,
    free: BTreeSet<usize>,
    dirty: Vec<bool>,
    /// Slot of each half of each ring node once prepared.
    placed: Vec<Option<[usize; 2]>>,
    edge_done: Vec<bool>,
}

impl<'a> Ring<'a> {
    fn new(n: usize, prep: &'a StatePrep, slots: usize) -> Self {
        let k = prep.k();
        Ring {
            n,
            k,
            prep,
            map: BitMap::new(n, k),
            program: Program::new(slots * k, 4 * k * n),
            free: (0..slots).collect(),
            dirty: vec![false; slots],
            placed: vec![None; 2 * n],
            edge_done: vec![false; 2 * n],
        }
    }

    fn qubits(&self, slot: usize) -> Vec<usize> {
        (slot * self.k..(slot + 1) * self.k).collect()
    }

    fn take_slot(&mut self) -> usize {
        let s = *self.free.iter().next().expect("ring schedule ran out of slots");
        self.free.remove(&s);
        if self.dirty[s] {
            // The data measurement of the edge that freed this slot precedes the reset.
            for q in self.qubits(s) {
                self.program.add(GateKind::Reset, &[q]);
            }
        }
        s
    }

    /// Prepares ring node `c`; `b_low` puts its B half in the lower slot.
    fn prepare(&mut self, c: usize, b_low: bool) {
        let lo = self.take_slot();
        let hi = self.take_slot();
        let (sa, sb) = if b_low { (hi, lo) } else { (lo, hi) };
        let (a, b) = (self.qubits(sa), self.qubits(sb));
        self.prep.emit(&mut self.program, &a, &b);
        self.placed[c] = Some([sa, sb]);
    }

    fn run_edges(&mut self) {
        let len = 2 * self.n;
        for j in 0..len {
            let (u, v) = (j, (j + 1) % len);
            if self.edge_done[j] || self.placed[u].is_none() || self.placed[v].is_none() {
                continue;
            }
            let half = if j % 2 == 0 { B } else { A };
            // The unprimed copy (even ring index) holds the control.
            let (ctl, tgt) = if u % 2 == 0 { (u, v) } else { (v, u) };
            let cs = self.placed[ctl].unwrap()[half];
            let ts = self.placed[tgt].unwrap()[half];
            let (cq, tq) = (self.qubits(cs), self.qubits(ts));
            for pos in 0..self.k {
                let (c, t) = (cq[pos], tq[pos]);
                self.program.add(GateKind::Cnot, &[c, t]);
                self.program.add(GateKind::H, &[c]);
                let cb = self.map.bit(ctl / 2, false, half, pos);
                let tb = self.map.bit(tgt / 2, true, half, pos);
                self.program.add(GateKind::Measure(cb), &[c]);
                self.program.add(GateKind::Measure(tb), &[t]);
            }
            for s in [cs, ts] {
                self.free.insert(s);
                self.dirty[s] = true;
            }
            self.edge_done[j] = true;
        }
    }
}

/// Width `4kn`: `ψ_i` at slots `2i, 2i+1` and `ψ'_i` at `2n + 2i, 2n + 2i + 1`.
pub(crate) fn tct_program(n: usize, prep: &StatePrep) -> Program {
    let mut ring = Ring::new(n, prep, 4 * n);
    for c in (0..2 * n).step_by(2).chain((1..2 * n).step_by(2)) {
        ring.prepare(c, false);
    }
    ring.run_edges();
    ring.program
}

/// Width `6k`: three live copies. The first step prepares `c_0` and both
/// neighbours; each later step extends the left and right frontiers by one
/// copy until a single copy closes the ring.
pub(crate) fn qe_tct_6k_program(n: usize, prep: &StatePrep) -> Program {
    let len = 2 * n;
    let mut ring = Ring::new(n, prep, 6);
    for c in [1, 0, len - 1] {
        ring.prepare(c, false);
    }
    ring.run_edges();
    let (mut left, mut right) = (2, len - 2);
    while left < right {
        ring.prepare(left, false);
        ring.prepare(right, false);
        ring.run_edges();
        left += 1;
        right -= 1;
    }
    ring.prepare(left, false);
    ring.run_edges();
    ring.program
}

/// Width `4k`: two live copies. After `c_0` and `c_1`, copies are added one
/// at a time alternating right and left frontiers. Primed copies joining the
/// left frontier are placed upside-down (B in the lower slot) so that the A
/// half lands next to the register it will be paired with.
pub(crate) fn qe_tct_4k_program(n: usize, prep: &StatePrep) -> Program {
    let len = 2 * n;
    let mut ring = Ring::new(n, prep, 4);
    ring.prepare(0, false);
    ring.prepare(1, true);
    ring.run_edges();
    let (mut left, mut right) = (2, len - 1);
    let mut go_right = true;
    while left <= right {
        if go_right {
            ring.prepare(right, false);
            right -= 1;
        } else {
            ring.prepare(left, left % 2 == 1);
            left += 1;
        }
        ring.run_edges();
        go_right = !go_right;
    }
    ring.program
}
