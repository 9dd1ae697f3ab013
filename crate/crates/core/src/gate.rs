use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Gate set shared by the simulator and the circuit IR.
///
/// The first nine variants are the Clifford gates the simulator executes
/// directly. `U1q`, `Rz` and `Rzz` are the trapped-ion native gates; they are
/// executable when their angles are multiples of π/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
    /// `exp(-i (cos φ X + sin φ Y) θ/2)`
    U1q { theta: f64, phi: f64, qubit: usize },
    /// `exp(-i λ Z/2)`
    Rz { lambda: f64, qubit: usize },
    /// `exp(-i θ/2 Z⊗Z)`
    Rzz { theta: f64, a: usize, b: usize },
}

const ANGLE_TOL: f64 = 1e-9;

/// Angle as a number of quarter turns mod 4, if it is one.
fn quarter_turns(angle: f64) -> Option<u8> {
    let k = angle / FRAC_PI_2;
    let r = k.round();
    if (k - r).abs() > ANGLE_TOL {
        return None;
    }
    Some((r as i64).rem_euclid(4) as u8)
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        use Gate::*;
        match *self {
            H(q) | S(q) | Sdg(q) | X(q) | Y(q) | Z(q) => vec![q],
            U1q { qubit, .. } | Rz { qubit, .. } => vec![qubit],
            CX(a, b) | CZ(a, b) | Swap(a, b) | Rzz { a, b, .. } => vec![a, b],
        }
    }

    pub fn arity(&self) -> usize {
        self.qubits().len()
    }

    pub fn mnemonic(&self) -> &'static str {
        use Gate::*;
        match self {
            H(_) => "h",
            S(_) => "s",
            Sdg(_) => "sdg",
            X(_) => "x",
            Y(_) => "y",
            Z(_) => "z",
            CX(..) => "cx",
            CZ(..) => "cz",
            Swap(..) => "swap",
            U1q { .. } => "u1q",
            Rz { .. } => "rz",
            Rzz { .. } => "rzz",
        }
    }

    pub fn is_native(&self) -> bool {
        matches!(self, Gate::U1q { .. } | Gate::Rz { .. } | Gate::Rzz { .. })
    }

    /// The Pauli this gate applies, for single-qubit Pauli gates.
    pub fn as_pauli(&self) -> Option<(usize, Pauli)> {
        match *self {
            Gate::X(q) => Some((q, Pauli::X)),
            Gate::Y(q) => Some((q, Pauli::Y)),
            Gate::Z(q) => Some((q, Pauli::Z)),
            _ => None,
        }
    }

    pub fn pauli(q: usize, p: Pauli) -> Option<Gate> {
        match p {
            Pauli::I => None,
            Pauli::X => Some(Gate::X(q)),
            Pauli::Y => Some(Gate::Y(q)),
            Pauli::Z => Some(Gate::Z(q)),
        }
    }

    /// Same gate acting on relabeled qubits.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        use Gate::*;
        match *self {
            H(q) => H(f(q)),
            S(q) => S(f(q)),
            Sdg(q) => Sdg(f(q)),
            X(q) => X(f(q)),
            Y(q) => Y(f(q)),
            Z(q) => Z(f(q)),
            CX(a, b) => CX(f(a), f(b)),
            CZ(a, b) => CZ(f(a), f(b)),
            Swap(a, b) => Swap(f(a), f(b)),
            U1q { theta, phi, qubit } => U1q { theta, phi, qubit: f(qubit) },
            Rz { lambda, qubit } => Rz { lambda, qubit: f(qubit) },
            Rzz { theta, a, b } => Rzz { theta, a: f(a), b: f(b) },
        }
    }

    /// Equivalent Clifford sequence (time order, up to global phase) for a
    /// native gate with quarter-turn angles. Clifford gates map to themselves.
    pub fn clifford_sequence(&self) -> Result<Vec<Gate>> {
        use Gate::*;
        let non_clifford = || Error::NonClifford(self.to_string());
        match *self {
            U1q { theta, phi, qubit: q } => {
                let t = quarter_turns(theta).ok_or_else(non_clifford)?;
                let p = quarter_turns(phi).ok_or_else(non_clifford)?;
                Ok(match (t, p) {
                    (0, _) => vec![],
                    // half turns about an equatorial axis
                    (2, 0) | (2, 2) => vec![X(q)],
                    (2, 1) | (2, 3) => vec![Y(q)],
                    // Rx(π/2) = H S H, Ry(π/2) = H·Z, Rx(-π/2) = H S† H, Ry(-π/2) = Z·H
                    (1, 0) | (3, 2) => vec![H(q), S(q), H(q)],
                    (1, 1) | (3, 3) => vec![Z(q), H(q)],
                    (1, 2) | (3, 0) => vec![H(q), Sdg(q), H(q)],
                    (1, 3) | (3, 1) => vec![H(q), Z(q)],
                    _ => unreachable!(),
                })
            }
            Rz { lambda, qubit: q } => Ok(match quarter_turns(lambda).ok_or_else(non_clifford)? {
                0 => vec![],
                1 => vec![S(q)],
                2 => vec![Z(q)],
                _ => vec![Sdg(q)],
            }),
            Rzz { theta, a, b } => Ok(match quarter_turns(theta).ok_or_else(non_clifford)? {
                0 => vec![],
                1 => vec![S(a), S(b), CZ(a, b)],
                2 => vec![Z(a), Z(b)],
                _ => vec![Sdg(a), Sdg(b), CZ(a, b)],
            }),
            g => Ok(vec![g]),
        }
    }
}

pub(crate) fn fmt_angle(a: f64) -> String {
    // Debug formatting of f64 is the shortest round-tripping representation.
    format!("{a:?}")
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Gate::*;
        match *self {
            U1q { theta, phi, qubit } => write!(f, "u1q({},{}) q{}", fmt_angle(theta), fmt_angle(phi), qubit),
            Rz { lambda, qubit } => write!(f, "rz({}) q{}", fmt_angle(lambda), qubit),
            Rzz { theta, a, b } => write!(f, "rzz({}) q{} q{}", fmt_angle(theta), a, b),
            _ => {
                let qs: Vec<String> = self.qubits().iter().map(|q| format!("q{q}")).collect();
                write!(f, "{} {}", self.mnemonic(), qs.join(" "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn quarter_turn_detection() {
        assert_eq!(quarter_turns(PI), Some(2));
        assert_eq!(quarter_turns(-FRAC_PI_2), Some(3));
        assert_eq!(quarter_turns(0.3), None);
        assert!(Gate::Rz { lambda: 0.3, qubit: 0 }.clifford_sequence().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Gate::CZ(0, 5).to_string(), "cz q0 q5");
        assert_eq!(Gate::Rz { lambda: 0.5, qubit: 2 }.to_string(), "rz(0.5) q2");
    }
}
