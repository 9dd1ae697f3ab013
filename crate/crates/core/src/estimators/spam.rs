//! Readout-error mitigation with a per-qubit transition matrix.
//!
//! `P_noisy = A^{⊗n} P_ideal`, with `A[observed][true]`. Both directions
//! are applied one tensor axis at a time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::Spam;

/// Column-stochastic 2×2 readout matrix, `m[observed][true]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix(pub [[f64; 2]; 2]);

impl TransitionMatrix {
    pub fn identity() -> Self {
        TransitionMatrix([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn from_spam(spam: &Spam) -> Self {
        TransitionMatrix([[1.0 - spam.p01, spam.p10], [spam.p01, 1.0 - spam.p10]])
    }

    pub fn inverse(&self) -> Result<Self> {
        let [[a, b], [c, d]] = self.0;
        let det = a * d - b * c;
        if det.abs() < 1e-12 {
            return Err(Error::SingularMatrix);
        }
        Ok(TransitionMatrix([[d / det, -b / det], [-c / det, a / det]]))
    }
}

/// Applies `m` to every axis of a distribution over `n` bits (index bit
/// `q` is qubit `q`).
fn apply_each_axis(dist: &mut [f64], n: usize, m: &TransitionMatrix) -> Result<()> {
    if dist.len() != 1 << n {
        return Err(Error::SizeMismatch { expected: 1 << n, got: dist.len() });
    }
    let [[a, b], [c, d]] = m.0;
    for q in 0..n {
        let bit = 1 << q;
        for i in 0..dist.len() {
            if i & bit == 0 {
                let (p0, p1) = (dist[i], dist[i | bit]);
                dist[i] = a * p0 + b * p1;
                dist[i | bit] = c * p0 + d * p1;
            }
        }
    }
    Ok(())
}

/// Forward readout noise: `A^{⊗n} P`.
pub fn spam_apply(dist: &mut [f64], n: usize, a: &TransitionMatrix) -> Result<()> {
    apply_each_axis(dist, n, a)
}

/// Summary of negative entries left after inversion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Negativity {
    pub count: usize,
    pub mass: f64,
}

/// Mitigation: `(A^{-1})^{⊗n} P`. Negative entries are kept; they are
/// summarized in the returned [`Negativity`].
pub fn spam_mitigate(dist: &mut [f64], n: usize, a: &TransitionMatrix) -> Result<Negativity> {
    apply_each_axis(dist, n, &a.inverse()?)?;
    let mut neg = Negativity::default();
    for &p in dist.iter() {
        if p < 0.0 {
            neg.count += 1;
            neg.mass += p;
        }
    }
    Ok(neg)
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(dist: &mut [f64]) {
    let mut sorted: Vec<f64> = dist.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    for p in dist.iter_mut() {
        *p = (*p - theta).max(0.0);
    }
}

/// Empirical distribution of `bits` restricted to `qubits` (bit `k` of the
/// index is `qubits[k]`).
pub fn marginal_distribution(shots: &[u64], qubits: &[usize]) -> Vec<f64> {
    let mut dist = vec![0.0; 1 << qubits.len()];
    if shots.is_empty() {
        return dist;
    }
    let w = 1.0 / shots.len() as f64;
    for &s in shots {
        let idx = qubits.iter().enumerate().fold(0usize, |acc, (k, &q)| acc | ((s >> q & 1) as usize) << k);
        dist[idx] += w;
    }
    dist
}

/// `⟨(−1)^{Σ bits}⟩` under a distribution.
pub fn parity_expectation(dist: &[f64]) -> f64 {
    dist.iter().enumerate().map(|(i, p)| if i.count_ones() % 2 == 0 { *p } else { -*p }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_leaves_distribution_unchanged() {
        let mut d = vec![0.1, 0.2, 0.3, 0.4];
        let neg = spam_mitigate(&mut d, 2, &TransitionMatrix::identity()).unwrap();
        assert_eq!(d, vec![0.1, 0.2, 0.3, 0.4]);
        assert_eq!(neg.count, 0);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = TransitionMatrix([[0.5, 0.5], [0.5, 0.5]]);
        assert_eq!(spam_mitigate(&mut [1.0, 0.0], 1, &m), Err(Error::SingularMatrix));
    }

    #[test]
    fn simplex_projection() {
        let mut d = vec![1.1, -0.05, -0.05, 0.0];
        project_to_simplex(&mut d);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(d.iter().all(|&p| p >= 0.0));
        assert!((d[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn marginal_and_parity() {
        let shots = [0b011u64, 0b001, 0b110, 0b000];
        let m = marginal_distribution(&shots, &[0, 1]);
        assert_eq!(m, vec![0.25, 0.25, 0.25, 0.25]);
        assert_eq!(parity_expectation(&m), 0.0);
        let m = marginal_distribution(&shots, &[2]);
        assert_eq!(parity_expectation(&m), 0.5);
    }
}
