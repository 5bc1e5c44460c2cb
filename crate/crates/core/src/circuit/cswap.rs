use super::{CircuitError, GateKind, Operation};

/// Controlled-SWAP of `a` and `b` as 8 CNOTs and 9 single-qubit gates over {H, T, Tdg}.
pub fn cswap_decomposed(control: usize, a: usize, b: usize) -> Result<Vec<Operation>, CircuitError> {
    if control == a || control == b {
        return Err(CircuitError::RepeatedQubit(control));
    }
    if a == b {
        return Err(CircuitError::RepeatedQubit(a));
    }
    use GateKind::*;
    let c = control;
    let seq: [(GateKind, &[usize]); 17] = [
        (Cnot, &[b, a]),
        (H, &[b]),
        (Cnot, &[a, b]),
        (Tdg, &[b]),
        (Cnot, &[c, b]),
        (T, &[b]),
        (Cnot, &[a, b]),
        (T, &[a]),
        (Tdg, &[b]),
        (Cnot, &[c, b]),
        (Cnot, &[c, a]),
        (T, &[b]),
        (T, &[c]),
        (Tdg, &[a]),
        (H, &[b]),
        (Cnot, &[c, a]),
        (Cnot, &[b, a]),
    ];
    Ok(seq.iter().map(|(k, q)| Operation::new(*k, q.to_vec())).collect())
}

/// SWAP as three alternating CNOTs.
pub fn swap_decomposed(a: usize, b: usize) -> Result<Vec<Operation>, CircuitError> {
    if a == b {
        return Err(CircuitError::RepeatedQubit(a));
    }
    Ok(vec![
        Operation::new(GateKind::Cnot, vec![a, b]),
        Operation::new(GateKind::Cnot, vec![b, a]),
        Operation::new(GateKind::Cnot, vec![a, b]),
    ])
}
