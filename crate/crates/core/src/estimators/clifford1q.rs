//! The 24-element single-qubit Clifford group as words over {H, S}.

use std::sync::OnceLock;

use crate::gate::Gate;
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::StabilizerTableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    H,
    S,
}

#[derive(Clone, Debug)]
pub struct Clifford1q {
    word: Vec<Letter>,
    /// `U† Z U`: the observable a Z readout measures after applying `U`.
    measured: (Pauli, i8),
}

impl Clifford1q {
    /// Gates realizing `U` on `qubit`, in time order.
    pub fn gates(&self, qubit: usize) -> Vec<Gate> {
        self.word
            .iter()
            .map(|l| match l {
                Letter::H => Gate::H(qubit),
                Letter::S => Gate::S(qubit),
            })
            .collect()
    }

    /// Pauli axis and sign measured by a Z readout after `U`.
    pub fn measured_axis(&self) -> (Pauli, i8) {
        self.measured
    }
}

/// Images of X and Z under conjugation, used to tell group elements apart.
fn signature(word: &[Letter]) -> [(Pauli, i8); 2] {
    let image = |p: Pauli| {
        let mut op = PauliOperator::single(1, 0, p).unwrap();
        for l in word {
            op = match l {
                Letter::H => conj_h(&op),
                Letter::S => conj_s(&op),
            };
        }
        (op.get(0), op.phase().sign().unwrap())
    };
    [image(Pauli::X), image(Pauli::Z)]
}

fn conj_h(p: &PauliOperator) -> PauliOperator {
    let (l, s) = (p.get(0), p.phase().sign().unwrap());
    let (l, s) = match l {
        Pauli::X => (Pauli::Z, s),
        Pauli::Z => (Pauli::X, s),
        Pauli::Y => (Pauli::Y, -s),
        Pauli::I => (Pauli::I, s),
    };
    signed(l, s)
}

fn conj_s(p: &PauliOperator) -> PauliOperator {
    let (l, s) = (p.get(0), p.phase().sign().unwrap());
    let (l, s) = match l {
        Pauli::X => (Pauli::Y, s),
        Pauli::Y => (Pauli::X, -s),
        other => (other, s),
    };
    signed(l, s)
}

fn signed(l: Pauli, s: i8) -> PauliOperator {
    let p = PauliOperator::single(1, 0, l).unwrap();
    if s < 0 {
        p.negated()
    } else {
        p
    }
}

fn measured_axis(word: &[Letter]) -> (Pauli, i8) {
    // U†|0⟩ is stabilized by U† Z U
    let mut t = StabilizerTableau::new(1).unwrap();
    for l in word.iter().rev() {
        let g = match l {
            Letter::H => Gate::H(0),
            Letter::S => Gate::Sdg(0),
        };
        t.apply(&g).unwrap();
    }
    let s = &t.stabilizers()[0];
    (s.get(0), s.phase().sign().unwrap())
}

/// All 24 elements in breadth-first order (shortest words first).
pub fn cliffords() -> &'static [Clifford1q] {
    static TABLE: OnceLock<Vec<Clifford1q>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut seen = vec![signature(&[])];
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        let mut i = 0;
        while i < words.len() {
            for l in [Letter::H, Letter::S] {
                let mut w = words[i].clone();
                w.push(l);
                let sig = signature(&w);
                if !seen.contains(&sig) {
                    seen.push(sig);
                    words.push(w);
                }
            }
            i += 1;
        }
        words.into_iter().map(|w| Clifford1q { measured: measured_axis(&w), word: w }).collect()
    })
}

pub const NUM_CLIFFORDS: usize = 24;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_24_elements_and_uniform_axes() {
        let all = cliffords();
        assert_eq!(all.len(), NUM_CLIFFORDS);
        // each of ±X, ±Y, ±Z is measured by exactly 4 elements
        for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
            for sign in [1, -1] {
                assert_eq!(all.iter().filter(|c| c.measured_axis() == (axis, sign)).count(), 4);
            }
        }
    }

    #[test]
    fn measured_axis_matches_simulation() {
        for c in cliffords() {
            let (axis, sign) = c.measured_axis();
            // prepare the +1 eigenstate of sign·axis, rotate, read Z: always 0
            let mut t = StabilizerTableau::new(1).unwrap();
            match axis {
                Pauli::X => t.apply(&Gate::H(0)).unwrap(),
                Pauli::Y => {
                    t.apply(&Gate::H(0)).unwrap();
                    t.apply(&Gate::S(0)).unwrap();
                }
                _ => {}
            }
            if sign < 0 {
                t.apply(&Gate::pauli(0, if axis == Pauli::Z { Pauli::X } else { Pauli::Z }).unwrap()).unwrap();
            }
            for g in c.gates(0) {
                t.apply(&g).unwrap();
            }
            let z = PauliOperator::single(1, 0, Pauli::Z).unwrap();
            assert_eq!(t.expect_pauli(&z).unwrap(), 1);
        }
    }
}
