//! Dense statevector simulator for cross-checking the stabilizer engine.
//!
//! Deliberately naive: every gate is a small complex matrix applied to the
//! full amplitude vector. Basis index bit `q` is the value of qubit `q`.
//! Practical up to ~20 qubits.

use num_complex::Complex64 as C;
use rand::Rng;

pub type Mat2 = [[C; 2]; 2];
pub type Mat4 = [[C; 4]; 4];

const fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

const O: C = c(0.0, 0.0);
const ONE: C = c(1.0, 0.0);
const I: C = c(0.0, 1.0);

pub fn mat_x() -> Mat2 {
    [[O, ONE], [ONE, O]]
}

pub fn mat_y() -> Mat2 {
    [[O, -I], [I, O]]
}

pub fn mat_z() -> Mat2 {
    [[ONE, O], [O, -ONE]]
}

pub fn mat_h() -> Mat2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
}

pub fn mat_s() -> Mat2 {
    [[ONE, O], [O, I]]
}

pub fn mat_sdg() -> Mat2 {
    [[ONE, O], [O, -I]]
}

/// `exp(-i (cos φ X + sin φ Y) θ/2)`
pub fn mat_u1q(theta: f64, phi: f64) -> Mat2 {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e_m = C::from_polar(1.0, -phi);
    let e_p = C::from_polar(1.0, phi);
    [[c(ct, 0.0), -I * st * e_m], [-I * st * e_p, c(ct, 0.0)]]
}

/// `exp(-i λ Z/2)`
pub fn mat_rz(lambda: f64) -> Mat2 {
    [[C::from_polar(1.0, -lambda / 2.0), O], [O, C::from_polar(1.0, lambda / 2.0)]]
}

fn diag4(d: [C; 4]) -> Mat4 {
    let mut m = [[O; 4]; 4];
    for k in 0..4 {
        m[k][k] = d[k];
    }
    m
}

/// Two-qubit matrices use local index `a_bit + 2 * b_bit` for qubits `(a, b)`.
pub fn mat_cx() -> Mat4 {
    // control = a (bit 0), target = b (bit 1)
    let mut m = [[O; 4]; 4];
    for k in 0..4usize {
        let out = if k & 1 == 1 { k ^ 2 } else { k };
        m[out][k] = ONE;
    }
    m
}

pub fn mat_cz() -> Mat4 {
    diag4([ONE, ONE, ONE, -ONE])
}

pub fn mat_swap() -> Mat4 {
    let mut m = [[O; 4]; 4];
    m[0][0] = ONE;
    m[1][2] = ONE;
    m[2][1] = ONE;
    m[3][3] = ONE;
    m
}

/// `exp(-i θ/2 Z⊗Z)`
pub fn mat_rzz(theta: f64) -> Mat4 {
    let a = C::from_polar(1.0, -theta / 2.0);
    let b = C::from_polar(1.0, theta / 2.0);
    diag4([a, b, b, a])
}

pub fn pauli_matrix(letter: char) -> Mat2 {
    match letter {
        'I' => [[ONE, O], [O, ONE]],
        'X' => mat_x(),
        'Y' => mat_y(),
        'Z' => mat_z(),
        other => panic!("bad Pauli letter {other}"),
    }
}

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<C>,
}

impl StateVector {
    pub fn new(n: usize) -> Self {
        let mut amps = vec![O; 1 << n];
        amps[0] = ONE;
        StateVector { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C>) -> Self {
        assert_eq!(amps.len(), 1 << n);
        StateVector { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_2q(&mut self, a: usize, b: usize, m: &Mat4) {
        assert_ne!(a, b);
        let (ba, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ba == 0 && i & bb == 0 {
                let idx = [i, i | ba, i | bb, i | ba | bb];
                let v: Vec<C> = idx.iter().map(|&j| self.amps[j]).collect();
                for (r, &j) in idx.iter().enumerate() {
                    self.amps[j] = (0..4).map(|k| m[r][k] * v[k]).sum();
                }
            }
        }
    }

    /// Applies a Pauli string (`letters[q]` acts on qubit `q`).
    pub fn apply_pauli(&mut self, letters: &str) {
        for (q, l) in letters.chars().enumerate() {
            if l != 'I' {
                self.apply_1q(q, &pauli_matrix(l));
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// ⟨ψ| sign·P |ψ⟩
    pub fn expect_pauli(&self, letters: &str, sign: f64) -> f64 {
        let mut phi = self.clone();
        phi.apply_pauli(letters);
        sign * self.inner(&phi).re
    }

    /// Projects onto the `outcome` (±1) eigenspace of `sign·P`; returns the
    /// probability of that outcome and renormalizes if it is nonzero.
    pub fn project_pauli(&mut self, letters: &str, sign: f64, outcome: i8) -> f64 {
        let mut phi = self.clone();
        phi.apply_pauli(letters);
        let s = sign * outcome as f64;
        for (a, b) in self.amps.iter_mut().zip(&phi.amps) {
            *a = (*a + b * s) * 0.5;
        }
        let p = self.norm_sqr();
        if p > 1e-14 {
            let k = 1.0 / p.sqrt();
            for a in &mut self.amps {
                *a *= k;
            }
        }
        p
    }

    pub fn measure_pauli<R: Rng>(&mut self, letters: &str, sign: f64, rng: &mut R) -> i8 {
        let p_plus = (1.0 + self.expect_pauli(letters, sign)) / 2.0;
        let outcome = if rng.gen::<f64>() < p_plus { 1 } else { -1 };
        self.project_pauli(letters, sign, outcome);
        outcome
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Reduced density matrix on `subset`, local index bit `k` ↔ `subset[k]`.
    pub fn reduced_density_matrix(&self, subset: &[usize]) -> Vec<Vec<C>> {
        let k = subset.len();
        let rest: Vec<usize> = (0..self.n).filter(|q| !subset.contains(q)).collect();
        let dim = 1 << k;
        let mut rho = vec![vec![O; dim]; dim];
        let embed = |local: usize, env: usize| -> usize {
            let mut i = 0;
            for (j, &q) in subset.iter().enumerate() {
                if local >> j & 1 == 1 {
                    i |= 1 << q;
                }
            }
            for (j, &q) in rest.iter().enumerate() {
                if env >> j & 1 == 1 {
                    i |= 1 << q;
                }
            }
            i
        };
        for env in 0..1usize << rest.len() {
            for r in 0..dim {
                let ar = self.amps[embed(r, env)];
                if ar == O {
                    continue;
                }
                for s in 0..dim {
                    rho[r][s] += ar * self.amps[embed(s, env)].conj();
                }
            }
        }
        rho
    }

    /// `-ln Tr ρ_A²`
    pub fn renyi2(&self, subset: &[usize]) -> f64 {
        let rho = self.reduced_density_matrix(subset);
        let mut tr = 0.0;
        for r in 0..rho.len() {
            for s in 0..rho.len() {
                tr += (rho[r][s] * rho[s][r]).re;
            }
        }
        -tr.ln()
    }

    /// `|⟨a|b⟩| ≈ 1`
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        (self.inner(other).norm() - 1.0).abs() < tol
    }
}

/// Dense unitary (column `k` = image of basis state `k`) of a gate sequence
/// given as a closure acting on a statevector.
pub fn unitary_of(n: usize, circuit: impl Fn(&mut StateVector)) -> Vec<Vec<C>> {
    let dim = 1 << n;
    let mut cols = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut amps = vec![O; dim];
        amps[k] = ONE;
        let mut sv = StateVector::from_amplitudes(n, amps);
        circuit(&mut sv);
        cols.push(sv.amps);
    }
    cols
}

/// True if `u = e^{iα} v` for some global phase.
pub fn unitaries_equal_up_to_phase(u: &[Vec<C>], v: &[Vec<C>], tol: f64) -> bool {
    let mut phase = None;
    for (cu, cv) in u.iter().zip(v) {
        for (a, b) in cu.iter().zip(cv) {
            if b.norm() > 1e-6 {
                let r = a / b;
                match phase {
                    None => phase = Some(r),
                    Some(p) => {
                        if (r - p).norm() > tol {
                            return false;
                        }
                    }
                }
            } else if a.norm() > tol {
                return false;
            }
        }
    }
    phase.is_some_and(|p: C| (p.norm() - 1.0).abs() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state() {
        let mut sv = StateVector::new(2);
        sv.apply_1q(0, &mat_h());
        sv.apply_2q(0, 1, &mat_cx());
        assert!((sv.expect_pauli("XX", 1.0) - 1.0).abs() < 1e-12);
        assert!((sv.expect_pauli("YY", 1.0) + 1.0).abs() < 1e-12);
        assert!((sv.renyi2(&[0]) - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn matrix_identities() {
        let hzh = unitary_of(1, |s| {
            s.apply_1q(0, &mat_h());
            s.apply_1q(0, &mat_z());
            s.apply_1q(0, &mat_h());
        });
        let x = unitary_of(1, |s| s.apply_1q(0, &mat_x()));
        assert!(unitaries_equal_up_to_phase(&hzh, &x, 1e-12));
        let rz = unitary_of(1, |s| s.apply_1q(0, &mat_rz(std::f64::consts::FRAC_PI_2)));
        let sm = unitary_of(1, |s| s.apply_1q(0, &mat_s()));
        assert!(unitaries_equal_up_to_phase(&rz, &sm, 1e-12));
    }

    #[test]
    fn projection_probability() {
        let mut sv = StateVector::new(1);
        sv.apply_1q(0, &mat_h());
        let p = sv.project_pauli("Z", 1.0, -1);
        assert!((p - 0.5).abs() < 1e-12);
        assert!((sv.expect_pauli("Z", 1.0) + 1.0).abs() < 1e-12);
    }
}
