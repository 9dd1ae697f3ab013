//! Stabilizer and logical expectation values from destructive
//! single-basis readout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::spam::{parity_expectation, spam_mitigate, TransitionMatrix};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind, PlaquetteKind, DEFECT_SETTINGS};
use crate::noise::NoiseSpec;
use crate::pauli::{Pauli, PauliOperator};
use crate::prep::PrepStrategy;

pub const REPORT_SCHEMA: u32 = 1;

/// One readout basis per data qubit, per setting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub settings: Vec<Vec<Pauli>>,
}

impl MeasurementPlan {
    /// Two settings on the torus (all X, all Z); the four listed plaquette
    /// groups on the defect lattice.
    pub fn for_lattice(lattice: &Lattice) -> Result<Self> {
        match lattice.kind() {
            LatticeKind::Torus => {
                let xs: Vec<usize> = lattice.of_kind(PlaquetteKind::X).iter().map(|p| p.label).collect();
                let zs: Vec<usize> = lattice.of_kind(PlaquetteKind::Z).iter().map(|p| p.label).collect();
                Self::from_plaquette_sets(lattice, &[&xs, &zs])
            }
            LatticeKind::Defect => Self::from_plaquette_sets(lattice, &DEFECT_SETTINGS),
        }
    }

    /// Settings that read the listed plaquettes simultaneously. Qubits no
    /// plaquette needs are read in Z.
    pub fn from_plaquette_sets(lattice: &Lattice, sets: &[&[usize]]) -> Result<Self> {
        let n = lattice.num_qubits();
        let mut settings = Vec::new();
        for set in sets {
            let mut bases: Vec<Option<Pauli>> = vec![None; n];
            for &label in *set {
                let p = lattice.plaquette(label).ok_or_else(|| Error::PlanGap(format!("p{label}")))?;
                for q in p.support() {
                    let l = p.op.get(q);
                    match bases[q] {
                        Some(b) if b != l => return Err(Error::BasisConflict(q)),
                        _ => bases[q] = Some(l),
                    }
                }
            }
            settings.push(bases.into_iter().map(|b| b.unwrap_or(Pauli::Z)).collect());
        }
        let plan = MeasurementPlan { settings };
        plan.check_coverage(lattice)?;
        Ok(plan)
    }

    /// Settings in which `op` can be read off (every support qubit in the
    /// matching basis).
    pub fn settings_for(&self, op: &PauliOperator) -> Vec<usize> {
        self.settings
            .iter()
            .enumerate()
            .filter(|(_, bases)| op.support().into_iter().all(|q| q < bases.len() && bases[q] == op.get(q)))
            .map(|(u, _)| u)
            .collect()
    }

    /// ±1 value of `op` in one shot of `setting`, if that setting reads it.
    pub fn read_value(&self, setting: usize, op: &PauliOperator, bits: u64) -> Option<i8> {
        if !self.settings_for(op).contains(&setting) {
            return None;
        }
        let parity = op.support().iter().fold(0, |acc, &q| acc ^ (bits >> q & 1));
        let sign = op.phase().sign().unwrap_or(1);
        Some(if parity == 1 { -sign } else { sign })
    }

    pub fn check_coverage(&self, lattice: &Lattice) -> Result<()> {
        for p in lattice.plaquettes() {
            if self.settings_for(&p.op).is_empty() {
                return Err(Error::PlanGap(format!("p{}", p.label)));
            }
        }
        Ok(())
    }

    /// Number of settings reading each stabilizer.
    pub fn coverage(&self, lattice: &Lattice) -> BTreeMap<usize, usize> {
        lattice.plaquettes().iter().map(|p| (p.label, self.settings_for(&p.op).len())).collect()
    }

    /// Basis change and readout of data qubits `0..n_data` into clbits
    /// `0..n_data`, on an `n_qubits` register.
    pub fn readout_circuit(&self, setting: usize, n_qubits: usize) -> Circuit {
        let bases = &self.settings[setting];
        let mut c = Circuit::new(n_qubits, bases.len());
        for (q, b) in bases.iter().enumerate() {
            match b {
                Pauli::X => {
                    c.h(q);
                }
                Pauli::Y => {
                    c.sdg(q).h(q);
                }
                _ => {}
            }
        }
        for q in 0..bases.len() {
            c.measure(q, q);
        }
        c
    }
}

/// One destructive readout shot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub setting: usize,
    /// Bit `q` = outcome of data qubit `q` (1 ↔ eigenvalue −1).
    pub bits: u64,
    pub heralded: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: usize,
}

impl Estimate {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Estimate { mean: f64::NAN, std_err: f64::NAN, n };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_err = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean, std_err, n }
    }
}

/// Connected correlations `⟨B_p B_q⟩ − ⟨B_p⟩⟨B_q⟩` of Z-type plaquettes,
/// averaged over pairs that share a qubit and pairs that do not.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub adjacent: f64,
    pub distant: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub seed: Option<u64>,
    pub noise: Option<NoiseSpec>,
    pub strategy: Option<PrepStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub lattice: String,
    pub shots: usize,
    pub kept: usize,
    pub discard_fraction: f64,
    /// `−` mean stabilizer expectation.
    pub energy_density: Estimate,
    pub mean_x_plaquettes: f64,
    pub mean_z_plaquettes: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_defect_plaquettes: Option<f64>,
    pub stabilizers: BTreeMap<usize, Estimate>,
    pub logicals: BTreeMap<String, Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_correlations: Option<Correlations>,
    pub spam_mitigated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mitigation_negativity: Option<f64>,
    pub meta: ReportMeta,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Include heralded shots.
    pub keep_all: bool,
    /// Per-qubit readout matrix to invert.
    pub mitigation: Option<TransitionMatrix>,
}

/// Per-pattern weights `w` with `Σ_s w(s) P_noisy(s)` equal to the parity
/// expectation of the mitigated distribution.
fn mitigated_parity_weights(k: usize, a: &TransitionMatrix) -> Result<(Vec<f64>, f64)> {
    let mut w = vec![0.0; 1 << k];
    let mut neg = 0.0f64;
    for (s, slot) in w.iter_mut().enumerate() {
        let mut e = vec![0.0; 1 << k];
        e[s] = 1.0;
        let n = spam_mitigate(&mut e, k, a)?;
        neg = neg.min(n.mass);
        *slot = parity_expectation(&e);
    }
    Ok((w, neg))
}

struct Observable {
    name: String,
    qubits: Vec<usize>,
    sign: f64,
    settings: Vec<usize>,
}

impl Observable {
    fn pattern(&self, bits: u64) -> usize {
        self.qubits.iter().enumerate().fold(0, |acc, (k, &q)| acc | ((bits >> q & 1) as usize) << k)
    }
}

fn observable(name: String, op: &PauliOperator, plan: &MeasurementPlan) -> Observable {
    Observable {
        name,
        qubits: op.support(),
        sign: op.phase().sign().unwrap_or(1) as f64,
        settings: plan.settings_for(op),
    }
}

/// Per-shot ±1 values (or mitigated weights) of an observable over the
/// retained shots of the settings that read it.
fn values(obs: &Observable, shots: &[&ShotRecord], mitigation: Option<&TransitionMatrix>) -> Result<Vec<f64>> {
    let weights = match mitigation {
        Some(a) => Some(mitigated_parity_weights(obs.qubits.len(), a)?.0),
        None => None,
    };
    Ok(shots
        .iter()
        .filter(|s| obs.settings.contains(&s.setting))
        .map(|s| {
            let p = obs.pattern(s.bits);
            let v = match &weights {
                Some(w) => w[p],
                None if p.count_ones() % 2 == 0 => 1.0,
                None => -1.0,
            };
            obs.sign * v
        })
        .collect())
}

pub fn expectation_report(
    records: &[ShotRecord],
    plan: &MeasurementPlan,
    lattice: &Lattice,
    opts: &ReportOptions,
) -> Result<ExperimentReport> {
    plan.check_coverage(lattice)?;
    let kept: Vec<&ShotRecord> = records.iter().filter(|r| opts.keep_all || !r.heralded).collect();
    let heralded = records.iter().filter(|r| r.heralded).count();
    let mitigation = opts.mitigation.as_ref();

    let mut stabilizers = BTreeMap::new();
    let mut by_kind: BTreeMap<PlaquetteKind, Vec<f64>> = BTreeMap::new();
    for p in lattice.plaquettes() {
        let obs = observable(format!("p{}", p.label), &p.op, plan);
        let est = Estimate::from_values(&values(&obs, &kept, mitigation)?);
        if est.n > 0 {
            by_kind.entry(p.kind).or_default().push(est.mean);
        }
        stabilizers.insert(p.label, est);
    }

    let mut logicals = BTreeMap::new();
    let mut families: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (name, op) in lattice.logicals() {
        let obs = observable(name.clone(), op, plan);
        if obs.settings.is_empty() {
            continue;
        }
        let est = Estimate::from_values(&values(&obs, &kept, mitigation)?);
        let family = name.rsplit_once('_').map_or(name.as_str(), |(f, _)| f).to_string();
        families.entry(family).or_default().push(est.mean);
        logicals.insert(obs.name, est);
    }
    for (family, means) in families {
        let n = means.len();
        logicals.insert(family, Estimate { mean: means.iter().sum::<f64>() / n as f64, std_err: f64::NAN, n });
    }
    // the averaged entries carry no standard error of their own
    for e in logicals.values_mut() {
        if e.std_err.is_nan() {
            e.std_err = 0.0;
        }
    }

    // stabilizers no kept shot has read yet (very short runs) are left out
    let read: Vec<&Estimate> = stabilizers.values().filter(|e| e.n > 0).collect();
    let n_stab = read.len() as f64;
    let energy_density = Estimate {
        mean: -read.iter().map(|e| e.mean).sum::<f64>() / n_stab,
        std_err: read.iter().map(|e| e.std_err.powi(2)).sum::<f64>().sqrt() / n_stab,
        n: kept.len(),
    };
    let mean = |k: PlaquetteKind| by_kind.get(&k).map(|v| v.iter().sum::<f64>() / v.len() as f64);

    let negativity = match mitigation {
        Some(a) => {
            let worst = lattice
                .plaquettes()
                .iter()
                .map(|p| mitigated_parity_weights(p.support().len(), a).map(|(_, n)| n))
                .collect::<Result<Vec<f64>>>()?;
            Some(worst.into_iter().fold(0.0, f64::min))
        }
        None => None,
    };

    Ok(ExperimentReport {
        schema: REPORT_SCHEMA,
        lattice: lattice.kind().name().to_string(),
        shots: records.len(),
        kept: kept.len(),
        discard_fraction: if records.is_empty() { 0.0 } else { heralded as f64 / records.len() as f64 },
        energy_density,
        mean_x_plaquettes: mean(PlaquetteKind::X).unwrap_or(f64::NAN),
        mean_z_plaquettes: mean(PlaquetteKind::Z).unwrap_or(f64::NAN),
        mean_defect_plaquettes: mean(PlaquetteKind::Defect),
        stabilizers,
        logicals,
        z_correlations: z_correlations(&kept, plan, lattice),
        spam_mitigated: mitigation.is_some(),
        mitigation_negativity: negativity,
        meta: ReportMeta::default(),
    })
}

fn z_correlations(shots: &[&ShotRecord], plan: &MeasurementPlan, lattice: &Lattice) -> Option<Correlations> {
    let zs = lattice.of_kind(PlaquetteKind::Z);
    let obs: Vec<Observable> = zs.iter().map(|p| observable(String::new(), &p.op, plan)).collect();
    let parity = |o: &Observable, bits: u64| if o.pattern(bits).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    let (mut adj, mut dist) = (Vec::new(), Vec::new());
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let common: Vec<usize> = obs[i].settings.iter().filter(|u| obs[j].settings.contains(u)).copied().collect();
            let sel: Vec<u64> = shots.iter().filter(|s| common.contains(&s.setting)).map(|s| s.bits).collect();
            if sel.len() < 2 {
                continue;
            }
            let n = sel.len() as f64;
            let (mut a, mut b, mut ab) = (0.0, 0.0, 0.0);
            for &s in &sel {
                let (x, y) = (parity(&obs[i], s), parity(&obs[j], s));
                a += x;
                b += y;
                ab += x * y;
            }
            let c = ab / n - (a / n) * (b / n);
            let shares = obs[i].qubits.iter().any(|q| obs[j].qubits.contains(q));
            if shares {
                adj.push(c);
            } else {
                dist.push(c);
            }
        }
    }
    if adj.is_empty() || dist.is_empty() {
        return None;
    }
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Some(Correlations { adjacent: avg(&adj), distant: avg(&dist) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_defect_lattice, build_torus};

    #[test]
    fn defect_plan_coverage() {
        let d = build_defect_lattice();
        let plan = MeasurementPlan::for_lattice(&d).unwrap();
        assert_eq!(plan.settings.len(), 4);
        let cov = plan.coverage(&d);
        let twice: Vec<usize> = cov.iter().filter(|(_, &c)| c == 2).map(|(&l, _)| l).collect();
        assert_eq!(twice, vec![0, 3, 5, 6, 11, 14]);
        assert!(cov.values().all(|&c| c >= 1));
    }

    #[test]
    fn plan_gap_and_conflict() {
        let t = build_torus(4, 4).unwrap();
        assert!(matches!(MeasurementPlan::from_plaquette_sets(&t, &[&[1, 3]]), Err(Error::PlanGap(_))));
        assert!(matches!(MeasurementPlan::from_plaquette_sets(&t, &[&[0, 1]]), Err(Error::BasisConflict(_))));
    }

    #[test]
    fn noiseless_shots_give_unit_means() {
        let t = build_torus(4, 4).unwrap();
        let plan = MeasurementPlan::for_lattice(&t).unwrap();
        // all-zero bits in both settings: every stabilizer and logical +1
        let records: Vec<ShotRecord> =
            (0..10).map(|i| ShotRecord { setting: i % 2, bits: 0, heralded: false }).collect();
        let r = expectation_report(&records, &plan, &t, &ReportOptions::default()).unwrap();
        assert_eq!(r.energy_density.mean, -1.0);
        assert_eq!(r.energy_density.std_err, 0.0);
        assert!(r.stabilizers.values().all(|e| e.mean == 1.0 && e.std_err == 0.0));
        assert_eq!(r.logicals["Z_hori"].mean, 1.0);
        assert_eq!(r.discard_fraction, 0.0);
    }

    #[test]
    fn mitigation_weights_match_distribution_inversion() {
        let a = TransitionMatrix::from_spam(&crate::noise::Spam { p01: 0.01, p10: 0.05 });
        let (w, _) = mitigated_parity_weights(3, &a).unwrap();
        let mut dist = vec![0.3, 0.1, 0.0, 0.05, 0.2, 0.15, 0.1, 0.1];
        let direct: f64 = dist.iter().zip(&w).map(|(p, w)| p * w).sum();
        spam_mitigate(&mut dist, 3, &a).unwrap();
        assert!((parity_expectation(&dist) - direct).abs() < 1e-12);
    }
}
