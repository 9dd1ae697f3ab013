//! Rényi-2 entropies from randomized measurements, topological
//! entanglement entropy and bootstrap errors.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::RandomizedMeasurementDataset;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::tableau::StabilizerTableau;

/// Treatment of the `P(s)²` terms of the purity sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalCorrection {
    /// `P(P·N_M − 1)/(N_M − 1)` on the diagonal and `N_M/(N_M − 1)·P·P'`
    /// off it, so every term is unbiased.
    #[default]
    Unbiased,
    /// Corrected diagonal only; off-diagonal terms keep a relative bias of
    /// order `1/N_M`.
    DiagonalOnly,
    /// Plug-in `P²`.
    Naive,
}

fn subset_mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0, |m, &q| m | 1 << q)
}

/// `p(p·n − 1)/(n − 1)`: unbiased estimate of `P²` from an empirical
/// frequency `p` over `n` shots.
pub fn unbiased_square(p: f64, n: usize) -> f64 {
    let n = n as f64;
    p * (p * n - 1.0) / (n - 1.0)
}

/// Purity of one setting's shots restricted to `mask`:
/// `2^{N_A} Σ_{s,s'} (−2)^{−D(s,s')} P(s) P(s')`.
pub fn setting_purity(shots: &[u64], mask: u64, correction: DiagonalCorrection) -> Result<f64> {
    let n_m = shots.len();
    if n_m < 2 {
        return Err(Error::TooFewShots(n_m));
    }
    let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
    for &s in shots {
        *hist.entry(s & mask).or_default() += 1;
    }
    let entries: Vec<(u64, f64)> = hist.into_iter().map(|(s, c)| (s, c as f64 / n_m as f64)).collect();
    // E[p·q] = P·Q·(n − 1)/n for distinct outcomes of one multinomial draw
    let cross = match correction {
        DiagonalCorrection::Unbiased => n_m as f64 / (n_m as f64 - 1.0),
        DiagonalCorrection::DiagonalOnly | DiagonalCorrection::Naive => 1.0,
    };
    let mut sum = 0.0;
    for (i, &(s, p)) in entries.iter().enumerate() {
        sum += match correction {
            DiagonalCorrection::Unbiased | DiagonalCorrection::DiagonalOnly => unbiased_square(p, n_m),
            DiagonalCorrection::Naive => p * p,
        };
        for &(t, q) in &entries[i + 1..] {
            let d = (s ^ t).count_ones() as i32;
            sum += 2.0 * cross * p * q * (-0.5f64).powi(d);
        }
    }
    Ok(sum * (mask.count_ones() as f64).exp2())
}

/// Per-setting purity estimates for one subsystem.
pub fn setting_purities(
    data: &RandomizedMeasurementDataset,
    subset: &[usize],
    correction: DiagonalCorrection,
) -> Result<Vec<f64>> {
    check_subset(data, subset)?;
    let mask = subset_mask(subset);
    (0..data.n_settings()).map(|u| setting_purity(data.shots(u), mask, correction)).collect()
}

fn check_subset(data: &RandomizedMeasurementDataset, subset: &[usize]) -> Result<()> {
    match subset.iter().find(|&&q| q >= data.n_qubits()) {
        Some(&q) => Err(Error::QubitOutOfRange { qubit: q, n: data.n_qubits() }),
        None => Ok(()),
    }
}

/// `Tr ρ_A²` averaged over settings.
pub fn purity_estimate(data: &RandomizedMeasurementDataset, subset: &[usize]) -> Result<f64> {
    let v = setting_purities(data, subset, DiagonalCorrection::Unbiased)?;
    if v.is_empty() {
        return Err(Error::InvalidArgument("dataset has no settings".into()));
    }
    Ok(v.iter().sum::<f64>() / v.len() as f64)
}

/// `−ln Tr ρ_A²`, with the purity clamped to its physical range
/// `[2^{−|A|}, 1]` so that statistical fluctuations cannot produce
/// infinite or negative entropies.
pub fn renyi2_from_purity(purity: f64, subset_size: usize) -> f64 {
    let floor = (-(subset_size as f64)).exp2();
    -purity.clamp(floor, 1.0).ln()
}

/// `γ = −(S_A + S_B + S_C − S_AB − S_AC − S_BC + S_ABC)` from entropies in
/// the order of [`Partition::subsystems`].
pub fn tee(s: &[f64; 7]) -> f64 {
    -(s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6])
}

/// A region split into parts A, B, C.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub region: String,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl Partition {
    /// A, B, C, AB, AC, BC, ABC.
    pub fn subsystems(&self) -> [Vec<usize>; 7] {
        let join = |x: &[&Vec<usize>]| -> Vec<usize> {
            let mut v: Vec<usize> = x.iter().flat_map(|p| p.iter().copied()).collect();
            v.sort_unstable();
            v
        };
        let (a, b, c) = (&self.a, &self.b, &self.c);
        [join(&[a]), join(&[b]), join(&[c]), join(&[a, b]), join(&[a, c]), join(&[b, c]), join(&[a, b, c])]
    }

    pub fn exact_tee(&self, state: &StabilizerTableau) -> Result<f64> {
        let subs = self.subsystems();
        let mut s = [0.0; 7];
        for (e, sub) in s.iter_mut().zip(&subs) {
            *e = state.renyi2_exact(sub)?;
        }
        Ok(tee(&s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionShape {
    /// One plaquette; A and B are two adjacent corners, C the other two.
    /// Each region is used in its four rotations.
    Square,
    /// Two vertically adjacent plaquettes (3 rows × 2 columns); A and B
    /// are the left and right halves of the top 2×2, C the bottom row.
    Tall,
}

/// Every placement of `shape` on the lattice (anchored at each site, with
/// periodic wraparound), skipping placements that touch a removed site.
pub fn regions(lattice: &Lattice, shape: RegionShape) -> Vec<Partition> {
    let (rows, cols) = (lattice.rows(), lattice.cols());
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let at = |dr: usize, dc: usize| lattice.qubit_at((r + dr) % rows, (c + dc) % cols);
            match shape {
                RegionShape::Square => {
                    // corners clockwise from top-left
                    let ring = [at(0, 0), at(0, 1), at(1, 1), at(1, 0)];
                    let Some(ring) = ring.into_iter().collect::<Option<Vec<usize>>>() else { continue };
                    for k in 0..4 {
                        out.push(Partition {
                            region: format!("square@{r},{c}/rot{k}"),
                            a: vec![ring[k]],
                            b: vec![ring[(k + 1) % 4]],
                            c: vec![ring[(k + 2) % 4], ring[(k + 3) % 4]],
                        });
                    }
                }
                RegionShape::Tall => {
                    let cells = [at(0, 0), at(1, 0), at(0, 1), at(1, 1), at(2, 0), at(2, 1)];
                    let Some(q) = cells.into_iter().collect::<Option<Vec<usize>>>() else { continue };
                    out.push(Partition {
                        region: format!("tall@{r},{c}"),
                        a: vec![q[0], q[1]],
                        b: vec![q[2], q[3]],
                        c: vec![q[4], q[5]],
                    });
                }
            }
        }
    }
    out
}

/// Per-setting purities of all seven subsystems of each partition, so that
/// entropies and γ can be recomputed cheaply on resampled settings.
#[derive(Clone, Debug)]
pub struct TeeSamples {
    pub partitions: Vec<Partition>,
    /// `purities[k][j][u]`: partition `k`, subsystem `j`, setting `u`.
    purities: Vec<[Vec<f64>; 7]>,
    sizes: Vec<[usize; 7]>,
}

impl TeeSamples {
    pub fn new(data: &RandomizedMeasurementDataset, partitions: Vec<Partition>) -> Result<Self> {
        let mut cache: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
        let mut purities = Vec::new();
        let mut sizes = Vec::new();
        for p in &partitions {
            let subs = p.subsystems();
            let mut per: [Vec<f64>; 7] = Default::default();
            for (slot, sub) in per.iter_mut().zip(&subs) {
                if !cache.contains_key(sub) {
                    let v = setting_purities(data, sub, DiagonalCorrection::Unbiased)?;
                    cache.insert(sub.clone(), v);
                }
                *slot = cache[sub].clone();
            }
            purities.push(per);
            sizes.push(subs.map(|s| s.len()));
        }
        Ok(TeeSamples { partitions, purities, sizes })
    }

    pub fn n_settings(&self) -> usize {
        self.purities.first().map_or(0, |p| p[0].len())
    }

    /// Entropies of partition `k` over the given settings.
    pub fn entropies(&self, k: usize, settings: &[usize]) -> [f64; 7] {
        let mut s = [0.0; 7];
        for j in 0..7 {
            let v = &self.purities[k][j];
            let mean = settings.iter().map(|&u| v[u]).sum::<f64>() / settings.len() as f64;
            s[j] = renyi2_from_purity(mean, self.sizes[k][j]);
        }
        s
    }

    /// Mean γ over all partitions, on the given settings.
    pub fn mean_tee(&self, settings: &[usize]) -> f64 {
        let n = self.partitions.len();
        (0..n).map(|k| tee(&self.entropies(k, settings))).sum::<f64>() / n as f64
    }

    /// Purities of the seven subsystems averaged over all partitions and
    /// the given settings.
    pub fn pooled_purities(&self, settings: &[usize]) -> [f64; 7] {
        let n = self.partitions.len() as f64;
        let mut out = [0.0; 7];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self
                .purities
                .iter()
                .map(|p| settings.iter().map(|&u| p[j][u]).sum::<f64>() / settings.len() as f64)
                .sum::<f64>()
                / n;
        }
        out
    }

    pub fn pooled_entropies(&self, settings: &[usize]) -> [f64; 7] {
        let p = self.pooled_purities(settings);
        std::array::from_fn(|j| renyi2_from_purity(p[j], self.sizes[0][j]))
    }

    /// γ from purities pooled over all partitions before taking logs.
    /// Valid when the partitions are translates or rotations of one shape
    /// (equal exact entropies); it averages the rare settings that resolve
    /// a region's stabilizers across all placements.
    pub fn pooled_tee(&self, settings: &[usize]) -> f64 {
        tee(&self.pooled_entropies(settings))
    }

    /// Subsystem sizes, in the order of [`Partition::subsystems`].
    pub fn subsystem_sizes(&self) -> [usize; 7] {
        self.sizes.first().copied().unwrap_or_default()
    }

    pub fn all_settings(&self) -> Vec<usize> {
        (0..self.n_settings()).collect()
    }
}

/// Standard deviation of `statistic` over `n_resamples` bootstrap draws of
/// the settings (sampled with replacement).
pub fn bootstrap_error<R: Rng + ?Sized>(
    n_settings: usize,
    n_resamples: usize,
    rng: &mut R,
    statistic: impl Fn(&[usize]) -> f64,
) -> Result<f64> {
    if n_resamples < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 resamples, got {n_resamples}")));
    }
    if n_settings == 0 {
        return Err(Error::InvalidArgument("no settings to resample".into()));
    }
    let mut idx = vec![0usize; n_settings];
    let values: Vec<f64> = (0..n_resamples)
        .map(|_| {
            for i in idx.iter_mut() {
                *i = rng.gen_range(0..n_settings);
            }
            statistic(&idx)
        })
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_torus;

    #[test]
    fn pure_zero_state_over_the_three_axes() {
        // |0⟩: Z readout always 0, X and Y readouts balanced
        let zero = 0u8;
        let x = crate::estimators::cliffords().iter().position(|c| c.measured_axis().0 == crate::Pauli::X).unwrap();
        let y = crate::estimators::cliffords().iter().position(|c| c.measured_axis().0 == crate::Pauli::Y).unwrap();
        let balanced: Vec<u64> = (0..16).map(|i| i % 2).collect();
        let mut d = RandomizedMeasurementDataset::new(1).unwrap();
        d.push_setting(vec![zero], vec![0; 16]).unwrap();
        d.push_setting(vec![x as u8], balanced.clone()).unwrap();
        d.push_setting(vec![y as u8], balanced).unwrap();
        let naive = setting_purities(&d, &[0], DiagonalCorrection::Naive).unwrap();
        assert_eq!(naive, vec![2.0, 0.5, 0.5]);
        assert!((naive.iter().sum::<f64>() / 3.0 - 1.0).abs() < 1e-15);
        // a single fixed basis does not sample the unitary average
        assert!((setting_purities(&d, &[0], DiagonalCorrection::Unbiased).unwrap()[0] - 2.0).abs() < 1e-12);

        let mut short = RandomizedMeasurementDataset::new(1).unwrap();
        short.push_setting(vec![0], vec![0]).unwrap();
        assert_eq!(purity_estimate(&short, &[0]), Err(Error::TooFewShots(1)));
    }

    #[test]
    fn product_state_has_zero_tee() {
        assert_eq!(tee(&[0.0; 7]), 0.0);
    }

    #[test]
    fn exact_tee_is_ln2_on_every_region() {
        let t = build_torus(4, 4).unwrap();
        let gs = t.ground_state(16).unwrap();
        for shape in [RegionShape::Square, RegionShape::Tall] {
            let parts = regions(&t, shape);
            assert_eq!(parts.len(), if shape == RegionShape::Square { 64 } else { 16 });
            for p in parts {
                assert!((p.exact_tee(&gs).unwrap() - std::f64::consts::LN_2).abs() < 1e-12, "{}", p.region);
            }
        }
    }

    #[test]
    fn bootstrap_of_constant_is_zero() {
        let mut rng = crate::rng::shot_rng(0, 0);
        assert_eq!(bootstrap_error(10, 100, &mut rng, |_| 3.0).unwrap(), 0.0);
        assert!(bootstrap_error(10, 99, &mut rng, |_| 3.0).is_err());
    }
}
