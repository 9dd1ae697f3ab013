//! Destabilizer/stabilizer tableau for pure stabilizer states.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers. Each row is a
//! Hermitian Pauli with sign bit; rows are packed into flat word arrays so
//! gate updates touch one column word per row and row products are
//! word-parallel.

use std::f64::consts::LN_2;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::gf2::BitMatrix;
use crate::pauli::{anticommute_words, product_phase, words_for, Pauli, PauliOperator, Phase};

#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Vec<bool>,
}

impl StabilizerTableau {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        let w = words_for(n);
        let mut t = StabilizerTableau { n, w, x: vec![0; 2 * n * w], z: vec![0; 2 * n * w], sign: vec![false; 2 * n] };
        for q in 0..n {
            t.x[q * w + q / 64] |= 1 << (q % 64);
            t.z[(n + q) * w + q / 64] |= 1 << (q % 64);
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_pauli(&self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: p.num_qubits() });
        }
        if !p.is_hermitian() {
            return Err(Error::ImaginaryPhase);
        }
        Ok(())
    }

    #[inline]
    fn row_x(&self, r: usize) -> &[u64] {
        &self.x[r * self.w..(r + 1) * self.w]
    }

    #[inline]
    fn row_z(&self, r: usize) -> &[u64] {
        &self.z[r * self.w..(r + 1) * self.w]
    }

    pub fn row(&self, r: usize) -> PauliOperator {
        let phase = if self.sign[r] { Phase::MinusOne } else { Phase::PlusOne };
        PauliOperator::from_words(self.n, self.row_x(r).to_vec(), self.row_z(r).to_vec(), phase)
    }

    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        (self.n..2 * self.n).map(|r| self.row(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliOperator> {
        (0..self.n).map(|r| self.row(r)).collect()
    }

    /// Applies any gate of the shared gate set; native gates must have
    /// quarter-turn angles.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        if let [a, b] = gate.qubits()[..] {
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
        }
        match *gate {
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::Sdg(q) => {
                self.s(q);
                self.pauli_z(q);
            }
            Gate::X(q) => self.pauli_x(q),
            Gate::Y(q) => {
                self.pauli_x(q);
                self.pauli_z(q);
            }
            Gate::Z(q) => self.pauli_z(q),
            Gate::CX(c, t) => self.cx(c, t),
            Gate::CZ(a, b) => {
                self.h(b);
                self.cx(a, b);
                self.h(b);
            }
            Gate::Swap(a, b) => self.swap_columns(a, b),
            native => {
                for g in native.clifford_sequence()? {
                    self.apply(&g)?;
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn col(&self, q: usize) -> (usize, u64) {
        (q / 64, 1u64 << (q % 64))
    }

    fn h(&mut self, q: usize) {
        let (wq, m) = self.col(q);
        for r in 0..2 * self.n {
            let i = r * self.w + wq;
            let xb = self.x[i] & m;
            let zb = self.z[i] & m;
            if xb != 0 && zb != 0 {
                self.sign[r] ^= true;
            }
            self.x[i] = (self.x[i] & !m) | zb;
            self.z[i] = (self.z[i] & !m) | xb;
        }
    }

    fn s(&mut self, q: usize) {
        let (wq, m) = self.col(q);
        for r in 0..2 * self.n {
            let i = r * self.w + wq;
            let xb = self.x[i] & m;
            if xb != 0 && self.z[i] & m != 0 {
                self.sign[r] ^= true;
            }
            self.z[i] ^= xb;
        }
    }

    fn pauli_x(&mut self, q: usize) {
        let (wq, m) = self.col(q);
        for r in 0..2 * self.n {
            if self.z[r * self.w + wq] & m != 0 {
                self.sign[r] ^= true;
            }
        }
    }

    fn pauli_z(&mut self, q: usize) {
        let (wq, m) = self.col(q);
        for r in 0..2 * self.n {
            if self.x[r * self.w + wq] & m != 0 {
                self.sign[r] ^= true;
            }
        }
    }

    fn cx(&mut self, c: usize, t: usize) {
        let (wc, mc) = self.col(c);
        let (wt, mt) = self.col(t);
        for r in 0..2 * self.n {
            let base = r * self.w;
            let xc = self.x[base + wc] & mc != 0;
            let zc = self.z[base + wc] & mc != 0;
            let xt = self.x[base + wt] & mt != 0;
            let zt = self.z[base + wt] & mt != 0;
            if xc && zt && (xt == zc) {
                self.sign[r] ^= true;
            }
            if xc {
                self.x[base + wt] ^= mt;
            }
            if zt {
                self.z[base + wc] ^= mc;
            }
        }
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        let (wa, ma) = self.col(a);
        let (wb, mb) = self.col(b);
        for r in 0..2 * self.n {
            let base = r * self.w;
            for arr in [&mut self.x, &mut self.z] {
                let va = arr[base + wa] & ma != 0;
                let vb = arr[base + wb] & mb != 0;
                if va != vb {
                    arr[base + wa] ^= ma;
                    arr[base + wb] ^= mb;
                }
            }
        }
    }

    /// Conjugates the state by a Pauli operator (phase ignored).
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: p.num_qubits() });
        }
        for r in 0..2 * self.n {
            if anticommute_words(self.row_x(r), self.row_z(r), p.x_words(), p.z_words()) {
                self.sign[r] ^= true;
            }
        }
        Ok(())
    }

    fn anticommutes_row(&self, r: usize, p: &PauliOperator) -> bool {
        anticommute_words(self.row_x(r), self.row_z(r), p.x_words(), p.z_words())
    }

    /// row h ← row h · row i. Only called on commuting pairs.
    fn row_mul(&mut self, h: usize, i: usize) {
        let w = self.w;
        let k = product_phase(self.row_x(h), self.row_z(h), self.row_x(i), self.row_z(i))
            + 2 * self.sign[h] as u8
            + 2 * self.sign[i] as u8;
        debug_assert!(k % 2 == 0, "row product is not Hermitian");
        self.sign[h] = k & 3 == 2;
        for j in 0..w {
            self.x[h * w + j] ^= self.x[i * w + j];
            self.z[h * w + j] ^= self.z[i * w + j];
        }
    }

    /// Product of the stabilizers selected by destabilizers that
    /// anticommute with `p`; equals ±p when p is in the stabilizer group.
    fn stabilizer_sign_of(&self, p: &PauliOperator) -> i8 {
        let mut sx = vec![0u64; self.w];
        let mut sz = vec![0u64; self.w];
        let mut k: u8 = 0;
        for i in 0..self.n {
            if self.anticommutes_row(i, p) {
                let r = self.n + i;
                k = (k + product_phase(&sx, &sz, self.row_x(r), self.row_z(r)) + 2 * self.sign[r] as u8) & 3;
                for j in 0..self.w {
                    sx[j] ^= self.x[r * self.w + j];
                    sz[j] ^= self.z[r * self.w + j];
                }
            }
        }
        debug_assert!(sx == p.x_words() && sz == p.z_words());
        if k & 3 == 0 {
            1
        } else {
            -1
        }
    }

    fn first_anticommuting_stabilizer(&self, p: &PauliOperator) -> Option<usize> {
        (self.n..2 * self.n).find(|&r| self.anticommutes_row(r, p))
    }

    /// Measures a Hermitian Pauli observable. Returns +1 or −1.
    ///
    /// Deterministic outcomes consume no randomness.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<i8> {
        self.check_pauli(p)?;
        match self.first_anticommuting_stabilizer(p) {
            None => Ok(self.deterministic_outcome(p)),
            Some(row) => {
                let outcome = if rng.gen::<bool>() { -1 } else { 1 };
                self.collapse(p, row, outcome);
                Ok(outcome)
            }
        }
    }

    /// Like [`measure_pauli`](Self::measure_pauli) but a random outcome is
    /// replaced by `preferred`. Returns the outcome actually realized.
    pub fn measure_pauli_forced(&mut self, p: &PauliOperator, preferred: i8) -> Result<i8> {
        self.check_pauli(p)?;
        match self.first_anticommuting_stabilizer(p) {
            None => Ok(self.deterministic_outcome(p)),
            Some(row) => {
                let outcome = if preferred < 0 { -1 } else { 1 };
                self.collapse(p, row, outcome);
                Ok(outcome)
            }
        }
    }

    fn deterministic_outcome(&self, p: &PauliOperator) -> i8 {
        let s = self.stabilizer_sign_of(p);
        if p.phase() == Phase::MinusOne {
            -s
        } else {
            s
        }
    }

    fn collapse(&mut self, p: &PauliOperator, row: usize, outcome: i8) {
        let d = row - self.n;
        // destabilizer d is overwritten below
        for r in 0..2 * self.n {
            if r != row && r != d && self.anticommutes_row(r, p) {
                self.row_mul(r, row);
            }
        }
        let w = self.w;
        for j in 0..w {
            self.x[d * w + j] = self.x[row * w + j];
            self.z[d * w + j] = self.z[row * w + j];
            self.x[row * w + j] = p.x_words()[j];
            self.z[row * w + j] = p.z_words()[j];
        }
        self.sign[d] = self.sign[row];
        self.sign[row] = (p.phase() == Phase::MinusOne) != (outcome < 0);
    }

    /// Exact expectation value: ±1 for group elements, 0 otherwise.
    pub fn expect_pauli(&self, p: &PauliOperator) -> Result<i8> {
        self.check_pauli(p)?;
        if self.first_anticommuting_stabilizer(p).is_some() {
            Ok(0)
        } else {
            Ok(self.deterministic_outcome(p))
        }
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<bool> {
        self.check_qubit(q)?;
        let p = PauliOperator::single(self.n, q, Pauli::Z)?;
        Ok(self.measure_pauli(&p, rng)? < 0)
    }

    /// Resets a qubit to `|0⟩`.
    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<()> {
        if self.measure_z(q, rng)? {
            self.pauli_x(q);
        }
        Ok(())
    }

    /// Second Rényi entropy (nats) of the reduced state on `subset`.
    ///
    /// For stabilizer states every Rényi entropy equals
    /// `(|A| − g_A) ln 2`, with `g_A` the number of independent stabilizers
    /// supported inside A, i.e. `rank(G restricted to Ā) − |Ā|`.
    pub fn renyi2_exact(&self, subset: &[usize]) -> Result<f64> {
        let mut inside = vec![false; self.n];
        for &q in subset {
            self.check_qubit(q)?;
            inside[q] = true;
        }
        let outside: Vec<usize> = (0..self.n).filter(|&q| !inside[q]).collect();
        if outside.is_empty() {
            return Ok(0.0);
        }
        let mut m = BitMatrix::new(2 * outside.len());
        for r in self.n..2 * self.n {
            let p = self.row(r);
            let bits: Vec<bool> =
                outside.iter().map(|&q| p.x_bit(q)).chain(outside.iter().map(|&q| p.z_bit(q))).collect();
            m.push_bools(&bits);
        }
        let s_bits = m.rank() - outside.len();
        Ok(s_bits as f64 * LN_2)
    }

    /// Canonical generating set: reduced row echelon form of the stabilizer
    /// group over the column order `x_0, z_0, x_1, z_1, …`, with signs.
    pub fn canonical_stabilizers(&self) -> Vec<PauliOperator> {
        let mut rows = self.stabilizers();
        let mut r = 0;
        for q in 0..self.n {
            for use_x in [true, false] {
                let bit = |p: &PauliOperator| if use_x { p.x_bit(q) } else { p.z_bit(q) };
                let Some(pivot) = (r..rows.len()).find(|&i| bit(&rows[i])) else {
                    continue;
                };
                rows.swap(r, pivot);
                for i in 0..rows.len() {
                    if i != r && bit(&rows[i]) {
                        rows[i] = &rows[i] * &rows[r];
                    }
                }
                r += 1;
            }
        }
        rows
    }

    /// True iff both tableaus describe the same state (phases included).
    pub fn states_equal(&self, other: &StabilizerTableau) -> bool {
        self.n == other.n && self.canonical_stabilizers() == other.canonical_stabilizers()
    }

    /// Exact `|⟨self|other⟩|²`: project a copy of `other` onto each
    /// stabilizer of `self` in turn. A random outcome contributes ½, a
    /// deterministic −1 makes the overlap vanish.
    pub fn overlap(&self, other: &StabilizerTableau) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, got: other.n });
        }
        let mut t = other.clone();
        let mut f = 1.0;
        for s in self.stabilizers() {
            match t.first_anticommuting_stabilizer(&s) {
                None => {
                    if t.deterministic_outcome(&s) < 0 {
                        return Ok(0.0);
                    }
                }
                Some(row) => {
                    t.collapse(&s, row, 1);
                    f *= 0.5;
                }
            }
        }
        Ok(f)
    }

    /// Checks the commutation pattern and full symplectic rank.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let rows: Vec<PauliOperator> = (0..2 * n).map(|r| self.row(r)).collect();
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let should_anticommute = j == i + n && i < n;
                if rows[i].commutes(&rows[j]) == should_anticommute {
                    return Err(format!("rows {i} and {j} have wrong commutation"));
                }
            }
        }
        let m = BitMatrix::from_bool_rows(2 * n, &rows.iter().map(|p| p.symplectic_bits()).collect::<Vec<_>>());
        if m.rank() != 2 * n {
            return Err("tableau rows are not independent".into());
        }
        Ok(())
    }
}

impl fmt::Debug for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StabilizerTableau(n = {})", self.n)?;
        for r in self.n..2 * self.n {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::shot_rng;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn new_state_is_all_zero() {
        let t = StabilizerTableau::new(16).unwrap();
        for q in 0..16 {
            assert_eq!(t.expect_pauli(&PauliOperator::single(16, q, Pauli::Z).unwrap()).unwrap(), 1);
        }
        let t1 = StabilizerTableau::new(1).unwrap();
        assert_eq!(t1.expect_pauli(&p("X")).unwrap(), 0);
        assert_eq!(StabilizerTableau::new(0).unwrap_err(), Error::EmptyRegister);
    }

    #[test]
    fn basic_gates() {
        let mut t = StabilizerTableau::new(1).unwrap();
        t.apply(&Gate::H(0)).unwrap();
        assert_eq!(t.expect_pauli(&p("X")).unwrap(), 1);
        t.apply(&Gate::S(0)).unwrap();
        assert_eq!(t.expect_pauli(&p("Y")).unwrap(), 1);
        t.apply(&Gate::Sdg(0)).unwrap();
        assert_eq!(t.expect_pauli(&p("X")).unwrap(), 1);
        t.apply(&Gate::Z(0)).unwrap();
        assert_eq!(t.expect_pauli(&p("X")).unwrap(), -1);
    }

    #[test]
    fn bell_state() {
        let mut t = StabilizerTableau::new(2).unwrap();
        t.apply(&Gate::H(0)).unwrap();
        t.apply(&Gate::CX(0, 1)).unwrap();
        assert_eq!(t.expect_pauli(&p("XX")).unwrap(), 1);
        assert_eq!(t.expect_pauli(&p("ZZ")).unwrap(), 1);
        assert_eq!(t.expect_pauli(&p("YY")).unwrap(), -1);
        assert_eq!(t.expect_pauli(&p("XZ")).unwrap(), 0);
        assert!((t.renyi2_exact(&[0]).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(t.renyi2_exact(&[]).unwrap(), 0.0);
        t.validate().unwrap();
    }

    #[test]
    fn repeated_qubit_rejected() {
        let mut t = StabilizerTableau::new(2).unwrap();
        assert_eq!(t.apply(&Gate::CX(1, 1)), Err(Error::RepeatedQubit(1)));
        assert!(matches!(t.apply(&Gate::H(2)), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn imaginary_phase_rejected() {
        let mut t = StabilizerTableau::new(1).unwrap();
        let mut rng = shot_rng(0, 0);
        assert_eq!(t.measure_pauli(&p("+iZ"), &mut rng), Err(Error::ImaginaryPhase));
        assert_eq!(t.expect_pauli(&p("-iX")), Err(Error::ImaginaryPhase));
    }

    #[test]
    fn deterministic_measurement_leaves_state() {
        let mut t = StabilizerTableau::new(3).unwrap();
        let before = t.clone();
        let mut rng = shot_rng(1, 0);
        assert_eq!(t.measure_pauli(&p("ZII"), &mut rng).unwrap(), 1);
        assert_eq!(t.measure_pauli(&p("-ZII"), &mut rng).unwrap(), -1);
        assert!(t.states_equal(&before));
    }

    #[test]
    fn x_measurement_frequencies() {
        let mut ones = 0;
        for shot in 0..1000 {
            let mut t = StabilizerTableau::new(1).unwrap();
            let mut rng = shot_rng(42, shot);
            if t.measure_pauli(&p("X"), &mut rng).unwrap() == 1 {
                ones += 1;
            }
        }
        let f = ones as f64 / 1000.0;
        assert!((f - 0.5).abs() < 0.05, "frequency {f}");
    }

    #[test]
    fn projection_is_idempotent() {
        for shot in 0..50 {
            let mut t = StabilizerTableau::new(4).unwrap();
            let mut rng = shot_rng(3, shot);
            let a = t.measure_pauli(&p("XXXX"), &mut rng).unwrap();
            let b = t.measure_pauli(&p("XXXX"), &mut rng).unwrap();
            assert_eq!(a, b);
            assert_eq!(t.expect_pauli(&p("XXXX")).unwrap(), a);
            t.validate().unwrap();
        }
    }

    #[test]
    fn states_equal_examples() {
        let zero = StabilizerTableau::new(1).unwrap();
        let mut hh = zero.clone();
        hh.apply(&Gate::H(0)).unwrap();
        hh.apply(&Gate::H(0)).unwrap();
        assert!(zero.states_equal(&zero));
        assert!(hh.states_equal(&zero));

        let mut plus = StabilizerTableau::new(2).unwrap();
        plus.apply(&Gate::H(0)).unwrap();
        plus.apply(&Gate::CX(0, 1)).unwrap();
        let mut minus = plus.clone();
        minus.apply(&Gate::Z(0)).unwrap();
        assert!(!plus.states_equal(&minus));
    }

    #[test]
    fn reset_returns_to_zero() {
        let mut t = StabilizerTableau::new(2).unwrap();
        let mut rng = shot_rng(5, 0);
        t.apply(&Gate::H(0)).unwrap();
        t.apply(&Gate::CX(0, 1)).unwrap();
        t.reset(0, &mut rng).unwrap();
        assert_eq!(t.expect_pauli(&p("ZI")).unwrap(), 1);
        t.validate().unwrap();
    }
}
