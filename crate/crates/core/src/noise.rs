//! Stochastic Pauli noise and the closed-form error budget.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::NativeGateCounts;
use crate::error::{Error, Result};
use crate::pauli::Pauli;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spam {
    /// Probability that a 0 is read as 1.
    pub p01: f64,
    /// Probability that a 1 is read as 0.
    pub p10: f64,
}

impl Spam {
    pub fn average(&self) -> f64 {
        (self.p01 + self.p10) / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// Two-qubit gate error probability.
    pub p2: f64,
    /// Share of two-qubit errors that are IZ, ZI or ZZ.
    pub z_bias: f64,
    /// One-qubit gate error probability.
    pub p1: f64,
    pub spam: Spam,
    /// Per-qubit error probability per two-qubit-gate layer.
    pub mem: f64,
    /// Quoted SPAM infidelity per prepared-and-measured qubit, used only by
    /// [`error_budget`]. Falls back to the mean readout flip rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spam_error: Option<f64>,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::h1_1()
    }
}

impl NoiseSpec {
    /// Device-like defaults (trapped-ion H1-1 characterization).
    pub fn h1_1() -> Self {
        NoiseSpec {
            p2: 0.003,
            z_bias: 0.6,
            p1: 4e-5,
            spam: Spam { p01: 0.001, p10: 0.005 },
            mem: 3e-4,
            spam_error: Some(0.004),
        }
    }

    pub fn noiseless() -> Self {
        NoiseSpec { p2: 0.0, z_bias: 0.0, p1: 0.0, spam: Spam { p01: 0.0, p10: 0.0 }, mem: 0.0, spam_error: None }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p2 == 0.0 && self.p1 == 0.0 && self.mem == 0.0 && self.spam.p01 == 0.0 && self.spam.p10 == 0.0
    }

    pub fn spam_budget_rate(&self) -> f64 {
        self.spam_error.unwrap_or_else(|| self.spam.average())
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("p2", self.p2),
            ("z_bias", self.z_bias),
            ("p1", self.p1),
            ("spam.p01", self.spam.p01),
            ("spam.p10", self.spam.p10),
            ("mem", self.mem),
            ("spam_error", self.spam_error.unwrap_or(0.0)),
        ];
        for (name, v) in fields {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidNoise(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: NoiseSpec = serde_json::from_str(s).map_err(|e| Error::InvalidNoise(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Sets one field by name; used by parameter sweeps.
    pub fn with_field(mut self, field: &str, value: f64) -> Result<Self> {
        match field {
            "p2" => self.p2 = value,
            "z_bias" => self.z_bias = value,
            "p1" => self.p1 = value,
            "mem" => self.mem = value,
            "p01" | "spam.p01" => self.spam.p01 = value,
            "p10" | "spam.p10" => self.spam.p10 = value,
            "spam" => self.spam = Spam { p01: value, p10: value },
            "spam_error" => self.spam_error = Some(value),
            other => return Err(Error::InvalidNoise(format!("unknown field '{other}'"))),
        }
        self.validate()?;
        Ok(self)
    }
}

const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// The 12 non-identity two-qubit Paulis that are not purely Z-type.
fn non_z_pairs() -> impl Iterator<Item = [Pauli; 2]> {
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    all.into_iter()
        .flat_map(move |a| all.into_iter().map(move |b| [a, b]))
        .filter(|&[a, b]| !matches!(a, Pauli::I | Pauli::Z) || !matches!(b, Pauli::I | Pauli::Z))
}

/// Draws a gate error for a gate of the given arity. Always consumes one
/// uniform variate, plus more only when an error occurs.
pub fn sample_gate_error<R: Rng + ?Sized>(spec: &NoiseSpec, arity: usize, rng: &mut R) -> Option<Vec<Pauli>> {
    let p = if arity == 2 { spec.p2 } else { spec.p1 };
    let u: f64 = rng.gen();
    if u >= p {
        return None;
    }
    if arity == 1 {
        return Some(vec![PAULIS[rng.gen_range(0..3)]]);
    }
    let pair = if rng.gen::<f64>() < spec.z_bias {
        [[Pauli::I, Pauli::Z], [Pauli::Z, Pauli::I], [Pauli::Z, Pauli::Z]][rng.gen_range(0..3)]
    } else {
        non_z_pairs().nth(rng.gen_range(0..12)).expect("12 pairs")
    };
    Some(pair.to_vec())
}

/// Uniform single-qubit Pauli with probability `mem`; one variate consumed.
pub fn sample_memory_error<R: Rng + ?Sized>(spec: &NoiseSpec, rng: &mut R) -> Option<Pauli> {
    if rng.gen::<f64>() < spec.mem {
        Some(PAULIS[rng.gen_range(0..3)])
    } else {
        None
    }
}

/// Readout with asymmetric flips. Always consumes exactly one variate.
pub fn apply_readout_flip<R: Rng + ?Sized>(spec: &NoiseSpec, bit: bool, rng: &mut R) -> bool {
    let u: f64 = rng.gen();
    let p = if bit { spec.spam.p10 } else { spec.spam.p01 };
    bit ^ (u < p)
}

/// Product of per-operation success probabilities.
pub fn error_budget(counts: &NativeGateCounts, n_qubits: usize, n_spam_events: usize, spec: &NoiseSpec) -> f64 {
    (1.0 - spec.p2).powi(counts.n_2q as i32)
        * (1.0 - spec.p1).powi(counts.n_1q as i32)
        * (1.0 - spec.mem).powi((counts.depth * n_qubits) as i32)
        * (1.0 - spec.spam_budget_rate()).powi(n_spam_events as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::shot_rng;

    #[test]
    fn non_z_pairs_are_twelve() {
        let v: Vec<_> = non_z_pairs().collect();
        assert_eq!(v.len(), 12);
        assert!(!v.contains(&[Pauli::I, Pauli::I]));
        assert!(!v.contains(&[Pauli::Z, Pauli::Z]));
        assert!(v.contains(&[Pauli::X, Pauli::Z]));
    }

    #[test]
    fn zero_rate_never_errs() {
        let spec = NoiseSpec { p2: 0.0, ..NoiseSpec::h1_1() };
        let mut rng = shot_rng(0, 0);
        assert!((0..100_000).all(|_| sample_gate_error(&spec, 2, &mut rng).is_none()));
    }

    #[test]
    fn full_z_bias_gives_z_errors_uniformly() {
        let spec = NoiseSpec { p2: 1.0, z_bias: 1.0, ..NoiseSpec::h1_1() };
        let mut rng = shot_rng(1, 0);
        let mut counts = [0usize; 3];
        let draws = 30_000;
        for _ in 0..draws {
            match sample_gate_error(&spec, 2, &mut rng).unwrap()[..] {
                [Pauli::I, Pauli::Z] => counts[0] += 1,
                [Pauli::Z, Pauli::I] => counts[1] += 1,
                [Pauli::Z, Pauli::Z] => counts[2] += 1,
                ref other => panic!("non-Z error {other:?}"),
            }
        }
        for c in counts {
            assert!((c as f64 / draws as f64 - 1.0 / 3.0).abs() < 0.02);
        }
    }

    #[test]
    fn readout_flip_rates() {
        let spec = NoiseSpec::h1_1();
        let mut rng = shot_rng(2, 0);
        let n = 1_000_000;
        for (bit, p) in [(false, spec.spam.p01), (true, spec.spam.p10)] {
            let flips = (0..n).filter(|_| apply_readout_flip(&spec, bit, &mut rng) != bit).count();
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((flips as f64 / n as f64 - p).abs() < 3.0 * sigma, "bit {bit}: {flips}");
        }
    }

    #[test]
    fn readout_identity_and_uniform() {
        let mut rng = shot_rng(3, 0);
        let off = NoiseSpec::noiseless();
        assert!((0..1000).all(|i| apply_readout_flip(&off, i % 2 == 0, &mut rng) == (i % 2 == 0)));
        let half = NoiseSpec { spam: Spam { p01: 0.5, p10: 0.5 }, ..NoiseSpec::noiseless() };
        for bit in [false, true] {
            let ones = (0..20_000).filter(|_| apply_readout_flip(&half, bit, &mut rng)).count();
            assert!((ones as f64 / 20_000.0 - 0.5).abs() < 0.02);
        }
    }

    #[test]
    fn budget_values() {
        let counts = NativeGateCounts { n_1q: 484, n_2q: 40, depth: 6 };
        let b = error_budget(&counts, 20, 24, &NoiseSpec::h1_1());
        assert!((b - 0.762).abs() < 0.001, "{b}");
        assert_eq!(error_budget(&counts, 20, 24, &NoiseSpec::noiseless()), 1.0);
        let one = NativeGateCounts { n_1q: 0, n_2q: 1, depth: 0 };
        assert!((error_budget(&one, 20, 0, &NoiseSpec::h1_1()) - 0.997).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = serde_json::to_string(&NoiseSpec::h1_1()).unwrap();
        assert_eq!(NoiseSpec::from_json(&s).unwrap(), NoiseSpec::h1_1());
        let bad = s.replace("0.003", "1.5");
        assert!(matches!(NoiseSpec::from_json(&bad), Err(Error::InvalidNoise(_))));
        assert!(NoiseSpec::h1_1().with_field("z_bias", 0.9).is_ok());
        assert!(NoiseSpec::h1_1().with_field("bogus", 0.1).is_err());
    }
}
