use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A dense single-qubit matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Native operation vocabulary.
///
/// Everything a circuit can contain is expressed with these kinds; CSWAP and
/// SWAP exist only as decompositions (see [`super::cswap_decomposed`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    U1(f64),
    U2(f64, f64),
    H,
    T,
    Tdg,
    Cnot,
    Identity,
    /// Measure into the given classical bit.
    Measure(usize),
    Reset,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateKind::Measure(_) | GateKind::Reset)
    }

    /// Matrix of a single-qubit unitary kind. `None` for CNOT, Measure and Reset.
    pub fn matrix(&self) -> Option<Mat2> {
        let m = match *self {
            GateKind::U1(lambda) => u1(lambda),
            GateKind::U2(phi, lambda) => u2(phi, lambda),
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::T => u1(FRAC_PI_4),
            GateKind::Tdg => u1(-FRAC_PI_4),
            GateKind::Identity => [[ONE, ZERO], [ZERO, ONE]],
            GateKind::Cnot | GateKind::Measure(_) | GateKind::Reset => return None,
        };
        Some(m)
    }

    /// Textual mnemonic used by the line format.
    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateKind::U1(_) => "u1",
            GateKind::U2(..) => "u2",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cnot => "cx",
            GateKind::Identity => "id",
            GateKind::Measure(_) => "measure",
            GateKind::Reset => "reset",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::U1(l) => write!(f, "u1({l})"),
            GateKind::U2(p, l) => write!(f, "u2({p}, {l})"),
            GateKind::Measure(c) => write!(f, "measure -> c{c}"),
            other => f.write_str(other.mnemonic()),
        }
    }
}

pub fn u1(lambda: f64) -> Mat2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, lambda)]]
}

pub fn u2(phi: f64, lambda: f64) -> Mat2 {
    let s = FRAC_1_SQRT_2;
    [
        [Complex64::new(s, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(s, phi + lambda),
        ],
    ]
}

pub(crate) const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub(crate) const PAULI_Y: Mat2 = [
    [ZERO, Complex64::new(0.0, -1.0)],
    [Complex64::new(0.0, 1.0), ZERO],
];
pub(crate) const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

/// Durations, in integer timesteps, of each operation class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DurationTable {
    pub single_qubit_gate: u64,
    pub cnot: u64,
    pub measure: u64,
    pub reset: u64,
}

impl Default for DurationTable {
    fn default() -> Self {
        DurationTable {
            single_qubit_gate: 1,
            cnot: 5,
            measure: 3,
            reset: 2,
        }
    }
}

impl DurationTable {
    pub fn duration(&self, kind: &GateKind) -> u64 {
        match kind {
            GateKind::Cnot => self.cnot,
            GateKind::Measure(_) => self.measure,
            GateKind::Reset => self.reset,
            _ => self.single_qubit_gate,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.single_qubit_gate > 0 && self.cnot > 0 && self.measure > 0 && self.reset > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < tol))
    }

    fn dagger_times(m: &Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            }
        }
        out
    }

    #[test]
    fn hadamard_is_u2_zero_pi() {
        let h = GateKind::H.matrix().unwrap();
        assert!(close(&h, &u2(0.0, PI), 1e-12));
    }

    #[test]
    fn t_is_u1_quarter_pi() {
        assert!(close(&GateKind::T.matrix().unwrap(), &u1(PI / 4.0), 1e-12));
    }

    #[test]
    fn prep_u2_matches_closed_form() {
        let theta: f64 = 0.87;
        let m = u2(theta - PI / 2.0, PI / 2.0);
        let s = FRAC_1_SQRT_2;
        let i = Complex64::i();
        let expect = [
            [Complex64::new(s, 0.0), -(i * PI / 2.0).exp() * s],
            [(i * (theta - PI / 2.0)).exp() * s, (i * theta).exp() * s],
        ];
        assert!(close(&m, &expect, 1e-12));
    }

    #[test]
    fn single_qubit_kinds_are_unitary() {
        let kinds = [
            GateKind::U1(0.3),
            GateKind::U2(1.1, -0.4),
            GateKind::H,
            GateKind::T,
            GateKind::Tdg,
            GateKind::Identity,
        ];
        let id = GateKind::Identity.matrix().unwrap();
        for k in kinds {
            let m = k.matrix().unwrap();
            assert!(close(&dagger_times(&m), &id, 1e-12), "{k} not unitary");
        }
    }

    #[test]
    fn default_durations() {
        let d = DurationTable::default();
        assert_eq!(d.duration(&GateKind::H), 1);
        assert_eq!(d.duration(&GateKind::Cnot), 5);
        assert_eq!(d.duration(&GateKind::Measure(0)), 3);
        assert_eq!(d.duration(&GateKind::Reset), 2);
        assert!(d.is_valid());
    }
}
