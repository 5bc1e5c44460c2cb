use serde::Serialize;

use crate::circuit::{Circuit, GateKind};

/// One step of a witness path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStep {
    /// Index into [`Circuit::instructions`].
    pub index: usize,
    pub gate: String,
    pub qubits: Vec<usize>,
    pub start: u64,
    pub duration: u64,
}

/// Standard and effective depth of a circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthReport {
    /// Makespan in timesteps.
    pub depth: u64,
    pub effective_depth: u64,
    /// A path whose elapsed time equals `effective_depth`.
    pub witness_path: Vec<PathStep>,
}

impl DepthReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-instruction successor on each of its qubits, skipping padding.
/// `None` when the qubit has no later instruction or its next one is a Reset.
fn flow_successors(c: &Circuit) -> Vec<[Option<usize>; 2]> {
    let ins = c.instructions();
    let mut next = vec![[None; 2]; ins.len()];
    for (q, line) in c.qubit_timelines().into_iter().enumerate() {
        let real: Vec<usize> = line.into_iter().filter(|&i| !ins[i].padding).collect();
        for w in real.windows(2) {
            if ins[w[1]].kind == GateKind::Reset {
                continue;
            }
            let slot = ins[w[0]].qubits.iter().position(|&x| x == q).expect("own qubit");
            next[w[0]][slot] = Some(w[1]);
        }
    }
    next
}

/// Longest information-flow path.
///
/// A path starts at any instruction following a qubit's initialization or a
/// Reset, moves forward along a qubit, may switch to the other qubit at any
/// two-qubit gate, and ends when the next operation on its qubit is a Reset or
/// the qubit has no further operations. Its length is the elapsed time from
/// the start of its first instruction to the end of its last. Padding and
/// Reset instructions never lie on a path.
pub fn effective_depth(c: &Circuit) -> DepthReport {
    let ins = c.instructions();
    let next = flow_successors(c);
    // Latest reachable end time from each instruction and the successor achieving it.
    let mut reach = vec![0u64; ins.len()];
    let mut via: Vec<Option<usize>> = vec![None; ins.len()];
    let mut order: Vec<usize> = (0..ins.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(ins[i].start));
    for &i in &order {
        if ins[i].padding || ins[i].kind == GateKind::Reset {
            continue;
        }
        reach[i] = ins[i].end();
        for s in next[i].iter().flatten() {
            if reach[*s] > reach[i] {
                reach[i] = reach[*s];
                via[i] = Some(*s);
            }
        }
    }
    let best = (0..ins.len())
        .filter(|&i| !ins[i].padding && ins[i].kind != GateKind::Reset)
        .max_by_key(|&i| {
            (
                reach[i] - ins[i].start,
                std::cmp::Reverse(ins[i].start),
                std::cmp::Reverse(i),
            )
        });
    let mut witness_path = Vec::new();
    let mut effective = 0;
    if let Some(mut i) = best {
        effective = reach[i] - ins[i].start;
        loop {
            witness_path.push(PathStep {
                index: i,
                gate: ins[i].kind.mnemonic().to_string(),
                qubits: ins[i].qubits.clone(),
                start: ins[i].start,
                duration: ins[i].duration,
            });
            match via[i] {
                Some(n) => i = n,
                None => break,
            }
        }
    }
    DepthReport {
        depth: c.makespan(),
        effective_depth: effective,
        witness_path,
    }
}

/// For each qubit, the longest stretch from an instruction following an
/// initialization or Reset to the last instruction before the next Reset.
pub fn max_time_between_resets(c: &Circuit) -> Vec<u64> {
    let ins = c.instructions();
    c.qubit_timelines()
        .into_iter()
        .map(|line| {
            let mut best = 0;
            let mut seg_start: Option<u64> = None;
            let mut seg_end = 0;
            for i in line.into_iter().filter(|&i| !ins[i].padding) {
                if ins[i].kind == GateKind::Reset {
                    if let Some(s) = seg_start.take() {
                        best = best.max(seg_end - s);
                    }
                    continue;
                }
                seg_start.get_or_insert(ins[i].start);
                seg_end = ins[i].end();
            }
            if let Some(s) = seg_start {
                best = best.max(seg_end - s);
            }
            best
        })
        .collect()
}
