use crate::circuit::{swap_decomposed, Circuit, DurationTable, GateKind, Program};
use crate::spectroscopy::ht::{cswap_block, range};
use crate::spectroscopy::{finish, measure_and_reset, SpectroscopyError, StatePrep};

/// The two ancilla qubits of [`build_contrived_qe_ht`].
pub const CONTRIVED_ANCILLAS: [usize; 2] = [0, 1];

fn swap(p: &mut Program, a: usize, b: usize) {
    for op in swap_decomposed(a, b).expect("distinct") {
        p.add(op.kind, &op.qubits);
    }
}

pub(crate) fn contrived_program(n: usize, prep: &StatePrep) -> Program {
    let k = prep.k();
    let (a1, a2) = (CONTRIVED_ANCILLAS[0], CONTRIVED_ANCILLAS[1]);
    let mut p = Program::new(4 * k + 2, 1);
    let (r1a, r1b) = (range(2, k), range(2 + k, k));
    let (r2a, r2b) = (range(2 + 2 * k, k), range(2 + 3 * k, k));
    p.add_lazy(GateKind::H, &[a1]);
    prep.emit(&mut p, &r1a, &r1b);
    prep.emit(&mut p, &r2a, &r2b);
    for block in 0..n - 1 {
        if block > 0 {
            // Park the control on a2 while a1 is reset, then bring it back.
            swap(&mut p, a1, a2);
            measure_and_reset(&mut p, a1);
            for &q in r2a.iter().chain(&r2b) {
                measure_and_reset(&mut p, q);
            }
            prep.emit(&mut p, &r2a, &r2b);
            swap(&mut p, a1, a2);
            measure_and_reset(&mut p, a2);
        }
        cswap_block(&mut p, a1, &r1a, &r2a);
    }
    p.add(GateKind::H, &[a1]);
    p.add(GateKind::Measure(0), &[a1]);
    p
}

/// A qubit-efficient Hadamard test with a second ancilla that holds the
/// control while the first one is reset. Width `4k + 2`; the ancilla bit is
/// classical bit 0, estimated like any Hadamard-test circuit.
///
/// Every individual qubit is reset often, yet the control information lives
/// for the whole circuit.
pub fn build_contrived_qe_ht(n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    build_contrived_qe_ht_with(n, prep, &DurationTable::default())
}

pub fn build_contrived_qe_ht_with(
    n: usize,
    prep: &StatePrep,
    durations: &DurationTable,
) -> Result<Circuit, SpectroscopyError> {
    if n < 2 {
        return Err(SpectroscopyError::InvalidN(n));
    }
    finish(&contrived_program(n, prep), durations)
}
