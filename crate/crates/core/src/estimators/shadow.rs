//! Fidelity with a stabilizer target from local-Clifford classical shadows.
//!
//! A snapshot with measured axes `P_i` and eigenvalues `σ_i` gives
//! `ρ̂ = ⊗_i (I + 3σ_i P_i)/2`, so
//! `⟨ψ|ρ̂|ψ⟩ = 2^{−n} Σ_g 3^{|g|} s(g) Π_{i∈supp g} σ_i`, summed over the
//! stabilizer-group elements `g = s(g)·⊗P_i` that only use the measured
//! axes. Those elements form a subgroup, found by linear algebra.

use serde::{Deserialize, Serialize};

use super::clifford1q::cliffords;
use super::dataset::RandomizedMeasurementDataset;
use crate::error::{Error, Result};
use crate::gf2::{get_bit, BitMatrix};
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::StabilizerTableau;

/// Largest matching subgroup enumerated per setting.
const MAX_SUBGROUP_DIM: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowEstimate {
    pub fidelity: f64,
    /// Standard error over settings.
    pub std_err: f64,
    pub snapshots: usize,
}

/// `(mask, coefficient)` terms of one setting's estimator; a shot with
/// bits `b` contributes `Σ coeff · (−1)^{|b ∧ mask|}`.
fn setting_terms(target: &[PauliOperator], n: usize, bases: &[u8]) -> Result<Vec<(u64, f64)>> {
    let axes: Vec<(Pauli, i8)> = bases.iter().map(|&b| cliffords()[b as usize].measured_axis()).collect();
    // coefficient vectors c with every qubit's component of Π S_j^{c_j}
    // commuting with (hence equal to I or) the measured axis
    let mut m = BitMatrix::new(target.len());
    for (q, &(axis, _)) in axes.iter().enumerate() {
        let row: Vec<bool> = target.iter().map(|s| !matches!(s.get(q), l if l == Pauli::I || l == axis)).collect();
        m.push_bools(&row);
    }
    let basis = m.nullspace();
    if basis.len() > MAX_SUBGROUP_DIM {
        return Err(Error::InvalidArgument(format!("matching subgroup of dimension {} is too large", basis.len())));
    }
    let gens: Vec<PauliOperator> = basis
        .iter()
        .map(|v| {
            target
                .iter()
                .enumerate()
                .filter(|(j, _)| get_bit(v, *j))
                .fold(PauliOperator::identity(n), |acc, (_, s)| acc.multiply(s))
        })
        .collect();
    let norm = (-(n as f64)).exp2();
    let mut terms = Vec::with_capacity(1 << gens.len());
    let mut g = PauliOperator::identity(n);
    for step in 0u64..1 << gens.len() {
        if step > 0 {
            // Gray code: flip one generator per step
            g = g.multiply(&gens[step.trailing_zeros() as usize]);
        }
        let sign = g.phase().sign().ok_or(Error::ImaginaryPhase)? as f64;
        let supp = g.support();
        let mask = supp.iter().fold(0u64, |m, &q| m | 1 << q);
        let axis_sign: f64 = supp.iter().map(|&q| axes[q].1 as f64).product();
        terms.push((mask, norm * 3f64.powi(supp.len() as i32) * sign * axis_sign));
    }
    Ok(terms)
}

/// Mean fidelity estimate per setting.
pub fn setting_fidelities(data: &RandomizedMeasurementDataset, target: &StabilizerTableau) -> Result<Vec<f64>> {
    let n = data.n_qubits();
    if target.num_qubits() != n {
        return Err(Error::SizeMismatch { expected: n, got: target.num_qubits() });
    }
    let gens = target.stabilizers();
    (0..data.n_settings())
        .map(|u| {
            let terms = setting_terms(&gens, n, data.bases(u))?;
            let shots = data.shots(u);
            let total: f64 = shots
                .iter()
                .map(|&b| {
                    terms.iter().map(|&(m, c)| if (b & m).count_ones() % 2 == 0 { c } else { -c }).sum::<f64>()
                })
                .sum();
            Ok(total / shots.len().max(1) as f64)
        })
        .collect()
}

pub fn shadow_fidelity(data: &RandomizedMeasurementDataset, target: &StabilizerTableau) -> Result<ShadowEstimate> {
    let per = setting_fidelities(data, target)?;
    let k = per.len();
    if k == 0 {
        return Err(Error::InvalidArgument("dataset has no settings".into()));
    }
    let mean = per.iter().sum::<f64>() / k as f64;
    let var = if k > 1 { per.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64 } else { 0.0 };
    Ok(ShadowEstimate { fidelity: mean, std_err: (var / k as f64).sqrt(), snapshots: data.total_shots() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_snapshot_values() {
        // |0⟩ measured in Z (identity Clifford) always reads 0: ρ̂ = 2|0⟩⟨0| − |1⟩⟨1|
        let t = StabilizerTableau::new(1).unwrap();
        let mut d = RandomizedMeasurementDataset::new(1).unwrap();
        d.push_setting(vec![0], vec![0, 0]).unwrap();
        assert!((shadow_fidelity(&d, &t).unwrap().fidelity - 2.0).abs() < 1e-12);
        // measuring X gives ⟨0|ρ̂|0⟩ = 1/2 for either outcome
        let h = cliffords().iter().position(|c| c.measured_axis().0 == Pauli::X).unwrap() as u8;
        let mut d = RandomizedMeasurementDataset::new(1).unwrap();
        d.push_setting(vec![h], vec![0, 1]).unwrap();
        assert!((shadow_fidelity(&d, &t).unwrap().fidelity - 0.5).abs() < 1e-12);
    }
}
