//! Multi-qubit Pauli operators in symplectic (x, z) bit form.
//!
//! A `PauliOperator` is `i^k ⊗_j σ_j` where each `σ_j` is one of the Hermitian
//! matrices I, X, Y, Z encoded by the bit pair `(x_j, z_j)` with
//! `(1, 1) ↦ Y`. Bits are packed 64 qubits per word so products and
//! commutation checks run word at a time.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Global phase `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(k: u8) -> Self {
        match k & 3 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn is_real(self) -> bool {
        self.exponent() & 1 == 0
    }

    /// +1 or −1 for real phases.
    pub fn sign(self) -> Option<i8> {
        match self {
            Phase::PlusOne => Some(1),
            Phase::MinusOne => Some(-1),
            _ => None,
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' | '_' | '.' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Exponent of `i` picked up by `σ_a σ_b`, summed over packed words.
///
/// Cyclic pairs (X,Y), (Y,Z), (Z,X) give `+i`; the reversed pairs give `−i`.
pub(crate) fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut pos = 0u32;
    let mut neg = 0u32;
    for k in 0..x1.len() {
        let (a, b, c, d) = (x1[k], z1[k], x2[k], z2[k]);
        let p = (a & !b & c & d) | (a & b & !c & d) | (!a & b & c & !d);
        let m = (a & b & c & !d) | (!a & b & c & d) | (a & !b & !c & d);
        pos += p.count_ones();
        neg += m.count_ones();
    }
    ((pos + 4 * 64 * x1.len() as u32 - neg) & 3) as u8
}

pub(crate) fn anticommute_words(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u32;
    for k in 0..x1.len() {
        acc ^= ((x1[k] & z2[k]) ^ (z1[k] & x2[k])).count_ones() & 1;
    }
    acc == 1
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliOperator { n, x: vec![0; w], z: vec![0; w], phase: Phase::PlusOne }
    }

    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Result<Self> {
        Self::from_sparse(n, &[(qubit, pauli)])
    }

    pub fn from_sparse(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &(q, s) in factors {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            // repeated qubits multiply in
            let f = {
                let mut f = Self::identity(n);
                f.set(q, s);
                f
            };
            p = &p * &f;
        }
        Ok(p)
    }

    /// Same Pauli letter on every listed qubit, e.g. `X⊗4` on a plaquette.
    pub fn uniform(n: usize, qubits: &[usize], pauli: Pauli) -> Result<Self> {
        let factors: Vec<_> = qubits.iter().map(|&q| (q, pauli)).collect();
        Self::from_sparse(n, &factors)
    }

    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: Phase) -> Self {
        debug_assert_eq!(x.len(), words_for(n));
        debug_assert_eq!(z.len(), words_for(n));
        PauliOperator { n, x, z, phase }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = Phase::from_exponent(self.phase.exponent() + 2);
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Overwrites the factor on `q`; the global phase is left untouched.
    pub fn set(&mut self, q: usize, pauli: Pauli) {
        let (xb, zb) = pauli.bits();
        let mask = 1u64 << (q % 64);
        let w = q / 64;
        if xb {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if zb {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn commutes(&self, other: &PauliOperator) -> bool {
        debug_assert_eq!(self.n, other.n);
        !anticommute_words(&self.x, &self.z, &other.x, &other.z)
    }

    /// Equal Pauli letters on every qubit, ignoring the phase.
    pub fn same_letters(&self, other: &PauliOperator) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    pub fn multiply(&self, rhs: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n, rhs.n, "Pauli size mismatch");
        let k = self.phase.exponent()
            + rhs.phase.exponent()
            + product_phase(&self.x, &self.z, &rhs.x, &rhs.z);
        PauliOperator {
            n: self.n,
            x: self.x.iter().zip(&rhs.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&rhs.z).map(|(a, b)| a ^ b).collect(),
            phase: Phase::from_exponent(k),
        }
    }

    /// Symplectic vector `(x_0..x_{n-1}, z_0..z_{n-1})` as packed words.
    pub fn symplectic_bits(&self) -> Vec<bool> {
        let mut v = Vec::with_capacity(2 * self.n);
        v.extend((0..self.n).map(|q| self.x_bit(q)));
        v.extend((0..self.n).map(|q| self.z_bit(q)));
        v
    }

    /// Letters as a dense string without phase, e.g. `XIZY`.
    pub fn letters(&self) -> String {
        (0..self.n).map(|q| self.get(q).letter()).collect()
    }

    /// Compact `XXXX@[0,1,4,5]` form (phase prefix only when not +1).
    pub fn to_support_string(&self) -> String {
        let supp = self.support();
        let letters: String = supp.iter().map(|&q| self.get(q).letter()).collect();
        let idx: Vec<String> = supp.iter().map(|q| q.to_string()).collect();
        format!("{}{}@[{}]", phase_prefix(self.phase), letters, idx.join(","))
    }

    pub fn parse_support_string(n: usize, s: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("bad Pauli string '{s}': {m}"));
        let (phase, rest) = split_phase(s.trim());
        let (letters, idx) = rest.split_once('@').ok_or_else(|| bad("missing '@'"))?;
        let idx = idx.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| bad("missing brackets"))?;
        let qubits: Vec<usize> = if idx.trim().is_empty() {
            Vec::new()
        } else {
            idx.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad index"))).collect::<Result<_>>()?
        };
        let letters: Vec<Pauli> =
            letters.chars().map(|c| Pauli::from_letter(c).ok_or_else(|| bad("bad letter"))).collect::<Result<_>>()?;
        if letters.len() != qubits.len() {
            return Err(bad("letter/index count mismatch"));
        }
        let factors: Vec<_> = qubits.into_iter().zip(letters).collect();
        Ok(Self::from_sparse(n, &factors)?.with_phase(phase))
    }
}

fn phase_prefix(p: Phase) -> &'static str {
    match p {
        Phase::PlusOne => "",
        Phase::PlusI => "+i",
        Phase::MinusOne => "-",
        Phase::MinusI => "-i",
    }
}

fn split_phase(s: &str) -> (Phase, &str) {
    for (pre, ph) in [("+i", Phase::PlusI), ("-i", Phase::MinusI), ("+", Phase::PlusOne), ("-", Phase::MinusOne)] {
        if let Some(rest) = s.strip_prefix(pre) {
            return (ph, rest);
        }
    }
    (Phase::PlusOne, s)
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;
    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.multiply(rhs)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = match self.phase {
            Phase::PlusOne => "+",
            other => phase_prefix(other),
        };
        write!(f, "{}{}", pre, self.letters())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Dense form with optional phase prefix: `XXZI`, `-YZ`, `+iXX`.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, rest) = split_phase(s.trim());
        let letters: Vec<Pauli> = rest
            .chars()
            .map(|c| Pauli::from_letter(c).ok_or_else(|| Error::InvalidArgument(format!("bad Pauli letter '{c}'"))))
            .collect::<Result<_>>()?;
        if letters.is_empty() {
            return Err(Error::EmptyRegister);
        }
        let mut p = PauliOperator::identity(letters.len());
        for (q, l) in letters.into_iter().enumerate() {
            p.set(q, l);
        }
        Ok(p.with_phase(phase))
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Per-qubit reference: sigma_a * sigma_b = i^g sigma_c
    fn g(a: Pauli, b: Pauli) -> i32 {
        use Pauli::*;
        match (a, b) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => -1,
            _ => 0,
        }
    }

    fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliOperator> {
        (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(ls, k)| {
            let mut p = PauliOperator::identity(n);
            for (q, l) in ls.into_iter().enumerate() {
                p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]);
            }
            p.with_phase(Phase::from_exponent(k))
        })
    }

    #[test]
    fn basic_products() {
        let x: PauliOperator = "X".parse().unwrap();
        let y: PauliOperator = "Y".parse().unwrap();
        let z: PauliOperator = "Z".parse().unwrap();
        assert_eq!((&x * &y).to_string(), "+iZ");
        assert_eq!((&y * &x).to_string(), "-iZ");
        assert_eq!((&z * &x).to_string(), "+iY");
        assert_eq!((&x * &x).to_string(), "+I");
    }

    #[test]
    fn support_string_round_trip() {
        let p = PauliOperator::uniform(16, &[0, 1, 4, 5], Pauli::X).unwrap();
        assert_eq!(p.to_support_string(), "XXXX@[0,1,4,5]");
        let q = PauliOperator::parse_support_string(16, "XXXX@[0,1,4,5]").unwrap();
        assert_eq!(p, q);
        let r = PauliOperator::parse_support_string(15, "-ZZYXX@[5,6,9,12,13]").unwrap();
        assert_eq!(r.phase(), Phase::MinusOne);
        assert_eq!(r.get(9), Pauli::Y);
    }

    #[test]
    fn words_beyond_64_qubits() {
        let a = PauliOperator::from_sparse(130, &[(3, Pauli::X), (70, Pauli::Z), (129, Pauli::Y)]).unwrap();
        let b = PauliOperator::from_sparse(130, &[(70, Pauli::X)]).unwrap();
        assert!(!a.commutes(&b));
        assert_eq!(a.weight(), 3);
        assert_eq!(a.support(), vec![3, 70, 129]);
    }

    proptest! {
        #[test]
        fn product_phase_matches_per_qubit_table(a in pauli_strategy(70), b in pauli_strategy(70)) {
            let prod = &a * &b;
            let mut k = a.phase().exponent() as i32 + b.phase().exponent() as i32;
            for q in 0..70 {
                k += g(a.get(q), b.get(q));
                let (ax, az) = a.get(q).bits();
                let (bx, bz) = b.get(q).bits();
                prop_assert_eq!(prod.get(q), Pauli::from_bits(ax ^ bx, az ^ bz));
            }
            prop_assert_eq!(prod.phase().exponent() as i32, k.rem_euclid(4));
        }

        #[test]
        fn commutation_is_symplectic_parity(a in pauli_strategy(9), b in pauli_strategy(9)) {
            let ab = &a * &b;
            let ba = &b * &a;
            let same = ab.phase() == ba.phase();
            prop_assert_eq!(a.commutes(&b), same);
        }

        #[test]
        fn multiplication_is_associative(a in pauli_strategy(5), b in pauli_strategy(5), c in pauli_strategy(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }
    }
}
