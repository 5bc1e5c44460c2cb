use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{BitString, Counts, NoiseProfile, SimError, StateVector};
use crate::circuit::{Circuit, GateKind, Mat2};

/// Order in which a shot walks the circuit.
///
/// Channels acting on disjoint qubits commute, so any order that respects
/// each qubit's own instruction sequence samples the same distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionOrder {
    /// Demand-driven: an instruction runs as soon as the instructions it
    /// depends on have run, and qubits are measured out after their last
    /// instruction. Keeps the number of simultaneously entangled qubits small.
    #[default]
    Lightcone,
    /// Strict start-time order, ties broken by lowest qubit index.
    Chronological,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SimOptions {
    pub order: ExecutionOrder,
}

/// Classical outcome of one shot over every classical bit, including
/// discarded ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    pub bits: Vec<u8>,
    pub seed: u64,
    pub shot: u64,
}

/// RNG for shot `index` under `master_seed`: an independent ChaCha stream
/// per shot, so results do not depend on scheduling or thread count.
pub fn shot_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone)]
enum Step {
    One {
        q: usize,
        m: Mat2,
        noisy: bool,
        dur: u64,
        p_rel: f64,
    },
    Cnot {
        c: usize,
        t: usize,
        dur: u64,
        p_rel: f64,
    },
    Idle {
        q: usize,
        dur: u64,
        p_rel: f64,
    },
    Measure {
        q: usize,
        bit: usize,
        dur: u64,
        p_rel: f64,
    },
    Reset {
        q: usize,
        dur: u64,
        p_rel: f64,
    },
    Retire {
        q: usize,
    },
}

impl Step {
    /// Single qubit whose trailing thermal noise can absorb a following idle.
    fn thermal_tail(&mut self) -> Option<(usize, &mut u64)> {
        match self {
            Step::One { q, dur, .. }
            | Step::Idle { q, dur, .. }
            | Step::Measure { q, dur, .. }
            | Step::Reset { q, dur, .. } => Some((*q, dur)),
            _ => None,
        }
    }
}

/// A circuit lowered to a flat step list for a fixed noise profile.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    steps: Vec<Step>,
    num_qubits: usize,
    num_clbits: usize,
    /// Position of each classical bit within the counted outcome string.
    slot_of: Vec<Option<usize>>,
    width: usize,
    noise: NoiseProfile,
    pauli: [f64; 2],
    depol: [f64; 2],
}

fn lightcone_order(circuit: &Circuit) -> Vec<(usize, bool)> {
    let ins = circuit.instructions();
    let lines = circuit.qubit_timelines();
    // Position of each instruction within each of its qubits' timelines.
    let mut pos_in_line = vec![[0usize; 2]; ins.len()];
    for (q, line) in lines.iter().enumerate() {
        for (k, &i) in line.iter().enumerate() {
            let slot = ins[i]
                .qubits
                .iter()
                .position(|&x| x == q)
                .expect("qubit in its own timeline");
            pos_in_line[i][slot] = k;
        }
    }
    let prev = |i: usize, j: usize| -> Option<usize> {
        let q = ins[i].qubits[j];
        let k = pos_in_line[i][j];
        (k > 0).then(|| lines[q][k - 1])
    };

    let mut done = vec![false; ins.len()];
    // Output items: (instruction index, false) or (qubit, true) for a retire.
    let mut out = Vec::with_capacity(ins.len() + circuit.num_qubits());
    let mut stack = Vec::new();

    let emit = |i: usize, done: &mut Vec<bool>, out: &mut Vec<(usize, bool)>| {
        done[i] = true;
        out.push((i, false));
        for (j, &q) in ins[i].qubits.iter().enumerate() {
            let mut k = pos_in_line[i][j];
            // Follow single-qubit successors while nothing else is needed.
            loop {
                match lines[q].get(k + 1) {
                    Some(&nx) if ins[nx].qubits.len() == 1 && !done[nx] => {
                        done[nx] = true;
                        out.push((nx, false));
                        k += 1;
                    }
                    Some(_) => break,
                    None => {
                        out.push((q, true));
                        break;
                    }
                }
            }
        }
    };

    for line in &lines {
        for &root in line {
            if done[root] {
                continue;
            }
            stack.push(root);
            while let Some(&top) = stack.last() {
                if done[top] {
                    stack.pop();
                    continue;
                }
                let pending = (0..ins[top].qubits.len())
                    .filter_map(|j| prev(top, j))
                    .find(|&p| !done[p]);
                match pending {
                    Some(p) => stack.push(p),
                    None => {
                        stack.pop();
                        emit(top, &mut done, &mut out);
                    }
                }
            }
        }
    }
    out
}

fn chronological_order(circuit: &Circuit) -> Vec<(usize, bool)> {
    let ins = circuit.instructions();
    let mut idx: Vec<usize> = (0..ins.len()).collect();
    idx.sort_by_key(|&i| (ins[i].start, ins[i].qubits.iter().copied().min().unwrap_or(0)));
    let mut last = vec![None; circuit.num_qubits()];
    for (pos, &i) in idx.iter().enumerate() {
        for &q in &ins[i].qubits {
            last[q] = Some(pos);
        }
    }
    let mut out = Vec::with_capacity(ins.len() + circuit.num_qubits());
    for (pos, &i) in idx.iter().enumerate() {
        out.push((i, false));
        for &q in &ins[i].qubits {
            if last[q] == Some(pos) {
                out.push((q, true));
            }
        }
    }
    out
}

/// Lowers a scheduled, padded circuit for repeated sampling.
pub fn compile(
    circuit: &Circuit,
    noise: &NoiseProfile,
    options: SimOptions,
) -> Result<CompiledCircuit, SimError> {
    noise.validate()?;
    if let Some((qubit, start, end)) = circuit.first_gap() {
        return Err(SimError::UnpaddedGap { qubit, start, end });
    }
    let order = match options.order {
        ExecutionOrder::Lightcone => lightcone_order(circuit),
        ExecutionOrder::Chronological => chronological_order(circuit),
    };
    let thermal = noise.has_thermal_noise();
    let gate_noise = noise.has_gate_noise();
    let mut steps: Vec<Step> = Vec::with_capacity(order.len());
    for (i, is_retire) in order {
        if is_retire {
            steps.push(Step::Retire { q: i });
            continue;
        }
        let ins = &circuit.instructions()[i];
        let dur = ins.duration;
        let q = ins.qubits[0];
        let step = match ins.kind {
            GateKind::Identity => {
                if !thermal {
                    continue;
                }
                if let Some((tq, tdur)) = steps.last_mut().and_then(Step::thermal_tail) {
                    if tq == q {
                        *tdur += dur;
                        continue;
                    }
                }
                Step::Idle { q, dur, p_rel: 0.0 }
            }
            GateKind::Cnot => Step::Cnot {
                c: q,
                t: ins.qubits[1],
                dur,
                p_rel: 0.0,
            },
            GateKind::Measure(bit) => Step::Measure {
                q,
                bit,
                dur,
                p_rel: 0.0,
            },
            GateKind::Reset => Step::Reset { q, dur, p_rel: 0.0 },
            kind => Step::One {
                q,
                m: kind.matrix().expect("single-qubit unitary"),
                noisy: gate_noise && ins.takes_gate_noise(),
                dur,
                p_rel: 0.0,
            },
        };
        steps.push(step);
    }
    for s in &mut steps {
        match s {
            Step::One { dur, p_rel, .. }
            | Step::Cnot { dur, p_rel, .. }
            | Step::Idle { dur, p_rel, .. }
            | Step::Measure { dur, p_rel, .. }
            | Step::Reset { dur, p_rel, .. } => *p_rel = noise.relax_prob(*dur),
            Step::Retire { .. } => {}
        }
    }

    let recorded = circuit.recorded_bits();
    let mut slot_of = vec![None; circuit.num_clbits()];
    for (pos, &b) in recorded.iter().enumerate() {
        slot_of[b] = Some(pos);
    }
    Ok(CompiledCircuit {
        steps,
        num_qubits: circuit.num_qubits(),
        num_clbits: circuit.num_clbits(),
        slot_of,
        width: recorded.len(),
        noise: noise.clone(),
        pauli: [noise.pauli_prob(1), noise.pauli_prob(2)],
        depol: [noise.depolarizing_fire_prob(1), noise.depolarizing_fire_prob(2)],
    })
}

impl CompiledCircuit {
    /// Width of the counted outcome strings.
    pub fn outcome_width(&self) -> usize {
        self.width
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    fn execute<R: rand::Rng>(
        &self,
        state: &mut StateVector,
        rng: &mut R,
        mut on_bit: impl FnMut(usize, bool),
    ) {
        let excited = self.noise.excited_population;
        for step in &self.steps {
            match *step {
                Step::One {
                    q,
                    ref m,
                    noisy,
                    p_rel,
                    ..
                } => {
                    state.apply_kernel(q, m);
                    if noisy {
                        state.gate_noise(&[q], self.pauli[0], self.depol[0], rng);
                    }
                    state.relax(q, p_rel, excited, rng);
                }
                Step::Cnot { c, t, p_rel, .. } => {
                    state.apply_gate_unchecked(&GateKind::Cnot, &[c, t]);
                    state.gate_noise(&[c, t], self.pauli[1], self.depol[1], rng);
                    state.relax(c, p_rel, excited, rng);
                    state.relax(t, p_rel, excited, rng);
                }
                Step::Idle { q, p_rel, .. } => state.relax(q, p_rel, excited, rng),
                Step::Measure { q, bit, p_rel, .. } => {
                    let (_, recorded) = state.measure(q, &self.noise, rng);
                    on_bit(bit, recorded);
                    state.relax(q, p_rel, excited, rng);
                }
                Step::Reset { q, p_rel, .. } => {
                    state.reset(q, rng);
                    state.relax(q, p_rel, excited, rng);
                }
                Step::Retire { q } => {
                    state.collapse(q, rng);
                }
            }
        }
    }

    /// Every classical bit of one shot.
    pub fn shot_record(&self, master_seed: u64, shot: u64) -> ShotRecord {
        let mut state = StateVector::new(self.num_qubits);
        let mut rng = shot_rng(master_seed, shot);
        let mut bits = vec![0u8; self.num_clbits];
        self.execute(&mut state, &mut rng, |b, v| bits[b] = v as u8);
        ShotRecord {
            bits,
            seed: master_seed,
            shot,
        }
    }

    /// Aggregated counts over the recorded bits for shots `0..shots`.
    pub fn sample(&self, shots: u64, master_seed: u64) -> Counts {
        let width = self.width;
        (0..shots)
            .into_par_iter()
            .fold(
                || {
                    (
                        StateVector::new(self.num_qubits),
                        BitString::zeros(width),
                        Counts::new(width),
                    )
                },
                |(mut state, mut key, mut counts), shot| {
                    state.reinit();
                    key.clear();
                    let mut rng = shot_rng(master_seed, shot);
                    self.execute(&mut state, &mut rng, |b, v| {
                        if let Some(pos) = self.slot_of[b] {
                            key.set(pos, v);
                        }
                    });
                    counts.add(&key, 1);
                    (state, key, counts)
                },
            )
            .map(|(_, _, c)| c)
            .reduce(|| Counts::new(width), Counts::merge)
    }
}

/// Runs `shots` shots of a scheduled, padded circuit.
pub fn run(
    circuit: &Circuit,
    noise: &NoiseProfile,
    shots: u64,
    master_seed: u64,
) -> Result<Counts, SimError> {
    run_with(circuit, noise, shots, master_seed, SimOptions::default())
}

pub fn run_with(
    circuit: &Circuit,
    noise: &NoiseProfile,
    shots: u64,
    master_seed: u64,
    options: SimOptions,
) -> Result<Counts, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    Ok(compile(circuit, noise, options)?.sample(shots, master_seed))
}
