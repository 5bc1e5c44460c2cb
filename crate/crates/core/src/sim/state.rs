use num_complex::Complex64;
use rand::Rng;

use super::{NoiseProfile, SimError};
use crate::circuit::{GateKind, Mat2, PAULI_X, PAULI_Y, PAULI_Z};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    /// Unentangled computational basis state.
    Classical(bool),
    /// Bit position inside the amplitude vector.
    Active(usize),
}

/// Pure state of `n` qubits.
///
/// Qubits in a computational basis state that are not entangled with
/// anything are tracked as classical bits; only the remaining qubits occupy
/// the amplitude vector, so its length is `2^active` rather than `2^n`. A
/// measured qubit leaves the vector immediately. [`StateVector::to_dense`]
/// reconstructs the full `2^n` vector.
#[derive(Debug, Clone)]
pub struct StateVector {
    slots: Vec<Slot>,
    /// `owners[p]` is the qubit stored at bit position `p`.
    owners: Vec<usize>,
    amps: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

fn is_diagonal(m: &Mat2) -> bool {
    m[0][1] == ZERO && m[1][0] == ZERO
}

fn is_antidiagonal(m: &Mat2) -> bool {
    m[0][0] == ZERO && m[1][1] == ZERO
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn new(num_qubits: usize) -> Self {
        StateVector {
            slots: vec![Slot::Classical(false); num_qubits],
            owners: Vec::new(),
            amps: vec![Complex64::new(1.0, 0.0)],
            scratch: Vec::new(),
        }
    }

    /// Builds a state from a full `2^n` amplitude vector (qubit 0 most significant).
    /// The vector is normalized on the way in.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimError::BadAmplitudes(len));
        }
        let n = len.trailing_zeros() as usize;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(SimError::BadAmplitudes(len));
        }
        // Bit position p holds qubit n-1-p, so indices coincide with the dense layout.
        Ok(StateVector {
            slots: (0..n).map(|q| Slot::Active(n - 1 - q)).collect(),
            owners: (0..n).map(|p| n - 1 - p).collect(),
            amps: amplitudes.into_iter().map(|a| a / norm).collect(),
            scratch: Vec::new(),
        })
    }

    /// Returns every qubit to `|0⟩`, keeping allocations.
    pub fn reinit(&mut self) {
        self.slots.fill(Slot::Classical(false));
        self.owners.clear();
        self.amps.clear();
        self.amps.push(Complex64::new(1.0, 0.0));
    }

    pub fn num_qubits(&self) -> usize {
        self.slots.len()
    }

    /// Number of qubits currently held in the amplitude vector.
    pub fn active_qubits(&self) -> usize {
        self.owners.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Full amplitude vector of length `2^n`, qubit 0 most significant.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.num_qubits();
        let mut base = 0usize;
        for (q, s) in self.slots.iter().enumerate() {
            if let Slot::Classical(true) = s {
                base |= 1 << (n - 1 - q);
            }
        }
        let mut out = vec![ZERO; 1 << n];
        for (idx, a) in self.amps.iter().enumerate() {
            let mut full = base;
            for (p, &q) in self.owners.iter().enumerate() {
                if idx >> p & 1 == 1 {
                    full |= 1 << (n - 1 - q);
                }
            }
            out[full] = *a;
        }
        out
    }

    fn check(&self, q: usize) -> Result<(), SimError> {
        if q < self.slots.len() {
            Ok(())
        } else {
            Err(SimError::QubitOutOfRange {
                qubit: q,
                num_qubits: self.slots.len(),
            })
        }
    }

    fn activate(&mut self, q: usize) -> usize {
        match self.slots[q] {
            Slot::Active(p) => p,
            Slot::Classical(v) => {
                let p = self.owners.len();
                let half = self.amps.len();
                if v {
                    self.amps.splice(0..0, std::iter::repeat_n(ZERO, half));
                } else {
                    self.amps.resize(2 * half, ZERO);
                }
                self.owners.push(q);
                self.slots[q] = Slot::Active(p);
                p
            }
        }
    }

    fn apply_matrix(&mut self, q: usize, m: &Mat2) {
        match self.slots[q] {
            Slot::Classical(_) if is_diagonal(m) => {}
            Slot::Classical(v) if is_antidiagonal(m) => self.slots[q] = Slot::Classical(!v),
            _ => {
                let p = self.activate(q);
                let stride = 1usize << p;
                let len = self.amps.len();
                let mut base = 0;
                while base < len {
                    for i in base..base + stride {
                        let (a, b) = (self.amps[i], self.amps[i + stride]);
                        self.amps[i] = m[0][0] * a + m[0][1] * b;
                        self.amps[i + stride] = m[1][0] * a + m[1][1] * b;
                    }
                    base += 2 * stride;
                }
            }
        }
    }

    fn apply_cnot(&mut self, c: usize, t: usize) {
        match self.slots[c] {
            Slot::Classical(false) => {}
            Slot::Classical(true) => self.apply_matrix(t, &PAULI_X),
            Slot::Active(pc) => {
                let pt = self.activate(t);
                let (cm, tm) = (1usize << pc, 1usize << pt);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
        }
    }

    /// Applies a unitary instruction without noise.
    pub fn apply_gate(&mut self, kind: &GateKind, qubits: &[usize]) -> Result<(), SimError> {
        if !kind.is_unitary() {
            return Err(SimError::NotUnitary(kind.mnemonic()));
        }
        if qubits.len() != kind.arity() {
            return Err(SimError::Arity(kind.mnemonic(), qubits.len()));
        }
        for &q in qubits {
            self.check(q)?;
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(SimError::RepeatedQubit(qubits[0]));
        }
        self.apply_gate_unchecked(kind, qubits);
        Ok(())
    }

    pub(crate) fn apply_gate_unchecked(&mut self, kind: &GateKind, qubits: &[usize]) {
        match kind {
            GateKind::Cnot => self.apply_cnot(qubits[0], qubits[1]),
            GateKind::Identity => {}
            k => self.apply_matrix(qubits[0], &k.matrix().expect("unitary kind")),
        }
    }

    pub(crate) fn apply_kernel(&mut self, q: usize, m: &Mat2) {
        self.apply_matrix(q, m);
    }

    pub(crate) fn apply_pauli(&mut self, q: usize, which: u8) {
        match which {
            1 => self.apply_matrix(q, &PAULI_X),
            2 => self.apply_matrix(q, &PAULI_Y),
            3 => self.apply_matrix(q, &PAULI_Z),
            _ => {}
        }
    }

    /// Probability of reading 1 on `q`.
    pub fn prob_one(&self, q: usize) -> f64 {
        match self.slots[q] {
            Slot::Classical(v) => v as u8 as f64,
            Slot::Active(p) => {
                let m = 1usize << p;
                let total: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
                let one: f64 = self
                    .amps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & m != 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum();
                one / total
            }
        }
    }

    /// Born-rule measurement of `q` without readout error. The qubit leaves the
    /// amplitude vector in the observed basis state.
    pub(crate) fn collapse<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        let p = match self.slots[q] {
            Slot::Classical(v) => return v,
            Slot::Active(p) => p,
        };
        let m = 1usize << p;
        let mut zero = 0.0;
        let mut one = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if i & m == 0 {
                zero += a.norm_sqr();
            } else {
                one += a.norm_sqr();
            }
        }
        let outcome = rng.gen::<f64>() * (zero + one) < one;
        let keep = if outcome { one } else { zero };
        let scale = 1.0 / keep.sqrt();
        let want = if outcome { m } else { 0 };

        self.scratch.clear();
        let len = self.amps.len();
        let low = m - 1;
        for j in 0..len / 2 {
            let i = (j & low) | ((j & !low) << 1) | want;
            self.scratch.push(self.amps[i] * scale);
        }
        std::mem::swap(&mut self.amps, &mut self.scratch);

        self.owners.remove(p);
        for &o in &self.owners[p..] {
            if let Slot::Active(pp) = &mut self.slots[o] {
                *pp -= 1;
            }
        }
        self.slots[q] = Slot::Classical(outcome);
        outcome
    }

    /// Measures `q`, returning `(raw, recorded)`. The state follows the raw
    /// outcome; the recorded bit is flipped with the readout error probability.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, noise: &NoiseProfile, rng: &mut R) -> (bool, bool) {
        let raw = self.collapse(q, rng);
        let flip = noise.readout_flip_prob > 0.0 && rng.gen::<f64>() < noise.readout_flip_prob;
        (raw, raw ^ flip)
    }

    /// Unrecorded measurement followed by a conditional flip to `|0⟩`.
    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) {
        self.collapse(q, rng);
        self.slots[q] = Slot::Classical(false);
    }

    /// Thermal relaxation for `duration` timesteps.
    pub fn apply_thermal<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        duration: u64,
        noise: &NoiseProfile,
        rng: &mut R,
    ) {
        self.relax(q, noise.relax_prob(duration), noise.excited_population, rng);
    }

    /// Relaxes `q` with probability `p_rel` to the thermal mixture. The jump is
    /// an unrecorded measurement followed by preparing `|1⟩` with probability
    /// `excited` and `|0⟩` otherwise, which is the exact unraveling of the
    /// reset-to-thermal channel even when `q` is entangled.
    pub(crate) fn relax<R: Rng + ?Sized>(&mut self, q: usize, p_rel: f64, excited: f64, rng: &mut R) {
        if p_rel <= 0.0 || rng.gen::<f64>() >= p_rel {
            return;
        }
        self.collapse(q, rng);
        let one = excited > 0.0 && rng.gen::<f64>() < excited;
        self.slots[q] = Slot::Classical(one);
    }

    /// Pauli then depolarizing channel for a unitary instruction.
    pub fn apply_gate_noise<R: Rng + ?Sized>(
        &mut self,
        kind: &GateKind,
        qubits: &[usize],
        noise: &NoiseProfile,
        rng: &mut R,
    ) {
        let arity = kind.arity();
        self.gate_noise(
            qubits,
            noise.pauli_prob(arity),
            noise.depolarizing_fire_prob(arity),
            rng,
        );
    }

    pub(crate) fn gate_noise<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        pauli: f64,
        depol_fire: f64,
        rng: &mut R,
    ) {
        if pauli > 0.0 {
            for &q in qubits {
                let u = rng.gen::<f64>();
                if u < 3.0 * pauli {
                    self.apply_pauli(q, 1 + ((u / pauli) as u8).min(2));
                }
            }
        }
        if depol_fire > 0.0 && rng.gen::<f64>() < depol_fire {
            let m = qubits.len() as u32;
            let code = rng.gen_range(1..4u32.pow(m));
            for (i, &q) in qubits.iter().enumerate() {
                let shift = 2 * (qubits.len() - 1 - i);
                self.apply_pauli(q, ((code >> shift) & 3) as u8);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::dense;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::new(1);
        s.apply_gate(&GateKind::H, &[0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&s.to_dense(), &[c(h, 0.0), c(h, 0.0)]));
    }

    #[test]
    fn cnot_on_10() {
        let mut s = StateVector::new(2);
        s.apply_kernel(0, &PAULI_X);
        s.apply_gate(&GateKind::Cnot, &[0, 1]).unwrap();
        assert!(close(
            &s.to_dense(),
            &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]
        ));
        assert_eq!(s.active_qubits(), 0);
    }

    #[test]
    fn errors() {
        let mut s = StateVector::new(2);
        assert!(matches!(
            s.apply_gate(&GateKind::H, &[2]),
            Err(SimError::QubitOutOfRange { .. })
        ));
        assert!(s.apply_gate(&GateKind::Reset, &[0]).is_err());
        assert!(s.apply_gate(&GateKind::Cnot, &[1, 1]).is_err());
    }

    #[test]
    fn matches_dense_on_random_circuit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 5;
        let mut s = StateVector::new(n);
        let mut d = dense::zero_state(n);
        for _ in 0..200 {
            let q = rng.gen_range(0..n);
            let kind = match rng.gen_range(0..6) {
                0 => GateKind::H,
                1 => GateKind::T,
                2 => GateKind::U2(rng.gen(), rng.gen()),
                3 => GateKind::U1(rng.gen()),
                4 => GateKind::Tdg,
                _ => GateKind::Cnot,
            };
            let qubits = if kind == GateKind::Cnot {
                vec![q, (q + 1 + rng.gen_range(0..n - 1)) % n]
            } else {
                vec![q]
            };
            s.apply_gate(&kind, &qubits).unwrap();
            dense::apply_ops(&mut d, n, &[crate::circuit::Operation::new(kind, qubits)]);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        }
        assert!(close(&s.to_dense(), &d));
    }

    #[test]
    fn measurement_collapses_partner() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut s = StateVector::new(3);
            s.apply_gate(&GateKind::H, &[1]).unwrap();
            s.apply_gate(&GateKind::Cnot, &[1, 2]).unwrap();
            s.apply_gate(&GateKind::H, &[0]).unwrap();
            let (raw, rec) = s.measure(2, &NoiseProfile::noiseless(), &mut rng);
            assert_eq!(raw, rec);
            assert_eq!(s.prob_one(1), raw as u8 as f64);
            assert!((s.prob_one(0) - 0.5).abs() < 1e-12);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reset_returns_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = StateVector::new(1);
        s.apply_kernel(0, &PAULI_X);
        s.reset(0, &mut rng);
        assert_eq!(s.prob_one(0), 0.0);
        s.apply_gate(&GateKind::H, &[0]).unwrap();
        s.reset(0, &mut rng);
        assert!(close(&s.to_dense(), &[c(1., 0.), c(0., 0.)]));
    }

    #[test]
    fn from_amplitudes_round_trip() {
        let amps = vec![c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)];
        let s = StateVector::from_amplitudes(amps.clone()).unwrap();
        assert!(close(&s.to_dense(), &amps));
        assert!(StateVector::from_amplitudes(vec![c(1., 0.); 3]).is_err());
    }
}
