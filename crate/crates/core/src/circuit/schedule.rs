use super::{Circuit, CircuitError, DurationTable, GateKind, Instruction, Program};

/// Schedules a program as soon as possible, then moves every operation
/// flagged `lazy` as late as its consumers allow (see [`defer_lazy`]).
///
/// Each non-lazy operation starts at the earliest time at or after the end of
/// every earlier operation sharing a qubit with it.
pub fn schedule_asap(program: &Program, durations: &DurationTable) -> Result<Circuit, CircuitError> {
    if !durations.is_valid() {
        return Err(CircuitError::InvalidDurations);
    }
    let mut ready = vec![0u64; program.num_qubits()];
    let mut instructions = Vec::with_capacity(program.ops().len());
    for op in program.ops() {
        let start = op.qubits.iter().map(|&q| ready[q]).max().unwrap_or(0);
        let duration = durations.duration(&op.kind);
        for &q in &op.qubits {
            ready[q] = start + duration;
        }
        instructions.push(Instruction {
            kind: op.kind,
            qubits: op.qubits.clone(),
            start,
            duration,
            padding: false,
            lazy: op.lazy,
        });
    }
    defer_in_place(&mut instructions, program.num_qubits());
    // Stable: ties keep program order, which is a valid topological order.
    instructions.sort_by_key(|i| i.start);
    Ok(Circuit::from_sorted_unchecked(
        program.num_qubits(),
        program.num_clbits(),
        instructions,
        program.discarded().clone(),
    ))
}

/// Moves lazy instructions as late as possible without delaying anything else.
///
/// A lazy instruction ends when its earliest successor on any of its qubits
/// starts. Instructions with no successor stay put. Non-lazy instructions and
/// the makespan never change.
pub fn defer_lazy(circuit: &Circuit) -> Circuit {
    let mut instructions = circuit.instructions().to_vec();
    defer_in_place(&mut instructions, circuit.num_qubits());
    instructions.sort_by_key(|i| i.start);
    Circuit::from_sorted_unchecked(
        circuit.num_qubits(),
        circuit.num_clbits(),
        instructions,
        circuit.discarded().clone(),
    )
}

/// `instructions` must be in a topological order (program order or start order).
fn defer_in_place(instructions: &mut [Instruction], num_qubits: usize) {
    if !instructions.iter().any(|i| i.lazy) {
        return;
    }
    // Start time of the next instruction on each qubit, walking backwards.
    let mut next_start: Vec<Option<u64>> = vec![None; num_qubits];
    for ins in instructions.iter_mut().rev() {
        if ins.lazy {
            let bound = ins.qubits.iter().filter_map(|&q| next_start[q]).min();
            if let Some(bound) = bound {
                ins.start = ins.start.max(bound - ins.duration);
            }
        }
        for &q in &ins.qubits {
            next_start[q] = Some(ins.start);
        }
    }
}

/// Covers every idle gap between a qubit's first and last instruction with
/// unit-duration identity instructions flagged as padding.
pub fn pad_idle(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Instruction> = circuit.instructions().to_vec();
    for (q, line) in circuit.qubit_timelines().into_iter().enumerate() {
        for w in line.windows(2) {
            let end = circuit.instructions()[w[0]].end();
            let next = circuit.instructions()[w[1]].start;
            out.extend((end..next).map(|t| Instruction {
                kind: GateKind::Identity,
                qubits: vec![q],
                start: t,
                duration: 1,
                padding: true,
                lazy: false,
            }));
        }
    }
    out.sort_by_key(|i| i.start);
    Circuit::from_sorted_unchecked(
        circuit.num_qubits(),
        circuit.num_clbits(),
        out,
        circuit.discarded().clone(),
    )
}
