//! Rényi-2 entropies and topological entanglement entropy of a
//! randomized-measurement dataset, with bootstrap errors.

use serde::{Deserialize, Serialize};

use super::dataset::RandomizedMeasurementDataset;
use super::purity::{bootstrap_error, regions, tee, RegionShape, TeeSamples};
use crate::error::Result;
use crate::lattice::Lattice;
use crate::rng::shot_rng;
use crate::tableau::StabilizerTableau;

pub const ENTROPY_SCHEMA: u32 = 1;
pub const SUBSYSTEM_NAMES: [&str; 7] = ["A", "B", "C", "AB", "AC", "BC", "ABC"];

/// Stream for bootstrap draws, disjoint from shot streams.
const BOOTSTRAP_STREAM: u64 = (1 << 63) | (1 << 62);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsystemEntropy {
    pub name: String,
    pub size: usize,
    /// Purity averaged over settings and placements.
    pub purity: f64,
    pub purity_err: f64,
    /// Exact purity of the reference state (first placement).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_exact: Option<f64>,
    pub entropy: f64,
    pub entropy_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_exact: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionGamma {
    pub region: String,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub shape: RegionShape,
    pub partitions: usize,
    /// γ from purities pooled over placements (primary estimate).
    pub gamma: f64,
    pub gamma_err: f64,
    /// Mean of the per-placement γ values.
    pub gamma_region_mean: f64,
    pub gamma_region_mean_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_exact: Option<f64>,
    pub subsystems: Vec<SubsystemEntropy>,
    pub regions: Vec<RegionGamma>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub schema: u32,
    pub n_qubits: usize,
    pub n_settings: usize,
    pub shots_per_setting: Option<usize>,
    pub bootstrap_resamples: usize,
    pub shapes: Vec<ShapeSummary>,
}

fn shape_summary(
    data: &RandomizedMeasurementDataset,
    lattice: &Lattice,
    shape: RegionShape,
    reference: Option<&StabilizerTableau>,
    n_resamples: usize,
    seed: u64,
) -> Result<ShapeSummary> {
    let parts = regions(lattice, shape);
    let samples = TeeSamples::new(data, parts)?;
    let all = samples.all_settings();
    let n_u = samples.n_settings();
    let stream = BOOTSTRAP_STREAM | shape as u64;

    let purity = samples.pooled_purities(&all);
    let entropy = samples.pooled_entropies(&all);
    let sizes = samples.subsystem_sizes();
    let subs = samples.partitions[0].subsystems();
    let mut subsystems = Vec::with_capacity(7);
    for j in 0..7 {
        let mut rng = shot_rng(seed, stream | (j as u64) << 8);
        let purity_err = bootstrap_error(n_u, n_resamples, &mut rng, |s| samples.pooled_purities(s)[j])?;
        let entropy_err = bootstrap_error(n_u, n_resamples, &mut rng, |s| samples.pooled_entropies(s)[j])?;
        let entropy_exact = reference.map(|r| r.renyi2_exact(&subs[j])).transpose()?;
        subsystems.push(SubsystemEntropy {
            name: SUBSYSTEM_NAMES[j].to_string(),
            size: sizes[j],
            purity: purity[j],
            purity_err,
            purity_exact: entropy_exact.map(|s| (-s).exp()),
            entropy: entropy[j],
            entropy_err,
            entropy_exact,
        });
    }

    let mut rng = shot_rng(seed, stream | 0xff << 8);
    let gamma_err = bootstrap_error(n_u, n_resamples, &mut rng, |s| samples.pooled_tee(s))?;
    let gamma_region_mean_err = bootstrap_error(n_u, n_resamples, &mut rng, |s| samples.mean_tee(s))?;
    let gamma_exact = match reference {
        Some(r) => Some(samples.partitions[0].exact_tee(r)?),
        None => None,
    };
    let regions = (0..samples.partitions.len())
        .map(|k| RegionGamma { region: samples.partitions[k].region.clone(), gamma: tee(&samples.entropies(k, &all)) })
        .collect();
    Ok(ShapeSummary {
        shape,
        partitions: samples.partitions.len(),
        gamma: samples.pooled_tee(&all),
        gamma_err,
        gamma_region_mean: samples.mean_tee(&all),
        gamma_region_mean_err,
        gamma_exact,
        subsystems,
        regions,
    })
}

/// Entropies and γ for the 2×2 and 2×3 region shapes. `reference`, if
/// given, adds exact values for comparison.
pub fn entropy_report(
    data: &RandomizedMeasurementDataset,
    lattice: &Lattice,
    reference: Option<&StabilizerTableau>,
    n_resamples: usize,
    seed: u64,
) -> Result<EntropyReport> {
    let shapes = [RegionShape::Square, RegionShape::Tall]
        .into_iter()
        .map(|shape| shape_summary(data, lattice, shape, reference, n_resamples, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyReport {
        schema: ENTROPY_SCHEMA,
        n_qubits: data.n_qubits(),
        n_settings: data.n_settings(),
        shots_per_setting: data.shots_per_setting(),
        bootstrap_resamples: n_resamples,
        shapes,
    })
}
