//! Shot pipelines: preparation followed by destructive or randomized
//! readout.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Executor};
use crate::error::{Error, Result};
use crate::estimators::report::{expectation_report, ExperimentReport, MeasurementPlan, ReportOptions, ShotRecord};
use crate::estimators::spam::TransitionMatrix;
use crate::estimators::{cliffords, RandomizedMeasurementDataset, NUM_CLIFFORDS};
use crate::lattice::Lattice;
use crate::noise::{NoiseSpec, Spam};
use crate::prep::{PrepPlan, PrepStrategy};
use crate::rng::{map_shots, shot_rng};
use crate::tableau::StabilizerTableau;

#[derive(Clone, Debug)]
pub struct PrepRunConfig {
    pub seed: u64,
    pub shots: usize,
    /// Estimate from heralded shots too.
    pub keep_all: bool,
    /// Invert the readout matrix of the noise model on the final readout.
    pub mitigate: bool,
    /// Apply readout flips to the final destructive readout. Turning this
    /// off (same seed, same random streams) gives the readout-error-free
    /// reference for judging mitigation.
    pub final_readout_errors: bool,
    /// Post-preparation states to keep (first non-heralded shots).
    pub retain_states: usize,
    /// Operations run after the preparation and before the readout.
    pub post_prep: Option<Circuit>,
    /// Added to every shot index, so that runs sharing a seed can use
    /// disjoint random streams.
    pub shot_offset: u64,
}

impl PrepRunConfig {
    pub fn new(seed: u64, shots: usize) -> Self {
        PrepRunConfig {
            seed,
            shots,
            keep_all: false,
            mitigate: false,
            final_readout_errors: true,
            retain_states: 0,
            post_prep: None,
            shot_offset: 0,
        }
    }
}

pub struct PrepOutcome {
    pub report: ExperimentReport,
    pub records: Vec<ShotRecord>,
    pub states: Vec<StabilizerTableau>,
}

fn readout_noise(noise: Option<&NoiseSpec>, with_errors: bool) -> Option<NoiseSpec> {
    noise.map(|n| if with_errors { *n } else { NoiseSpec { spam: Spam { p01: 0.0, p10: 0.0 }, ..*n } })
}

fn pack(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |acc, (q, &b)| acc | (b as u64) << q)
}

/// Prepares the ground state `cfg.shots` times; shot `i` reads out with
/// setting `i mod #settings` of the lattice's measurement plan. Retained
/// states are taken after `post_prep`.
pub fn prepare_ground_state(
    lattice: &Lattice,
    strategy: &PrepStrategy,
    noise: Option<&NoiseSpec>,
    cfg: &PrepRunConfig,
) -> Result<PrepOutcome> {
    if let Some(n) = noise {
        n.validate()?;
    }
    let plan = PrepPlan::new(lattice, strategy)?;
    let mplan = MeasurementPlan::for_lattice(lattice)?;
    let prep_ex = Executor::with_noise(noise.copied());
    let read_ex = Executor::with_noise(readout_noise(noise, cfg.final_readout_errors));
    let readouts: Vec<Circuit> = (0..mplan.settings.len()).map(|u| mplan.readout_circuit(u, plan.n_qubits())).collect();

    let results = map_shots(cfg.shots as u64, |i| -> Result<(ShotRecord, Option<StabilizerTableau>)> {
        let mut shot = plan.run_shot(&prep_ex, cfg.seed, cfg.shot_offset + i)?;
        if let Some(post) = &cfg.post_prep {
            prep_ex.run_on(post, &mut shot.state, &mut Vec::new(), &mut shot.rng)?;
        }
        let prepared = (i < cfg.retain_states as u64).then(|| shot.state.clone());
        let setting = i as usize % readouts.len();
        let mut bits = Vec::new();
        read_ex.run_on(&readouts[setting], &mut shot.state, &mut bits, &mut shot.rng)?;
        Ok((ShotRecord { setting, bits: pack(&bits), heralded: shot.syndrome.heralded }, prepared))
    });
    let mut records = Vec::with_capacity(cfg.shots);
    let mut states = Vec::new();
    for r in results {
        let (rec, st) = r?;
        if let Some(s) = st {
            if !rec.heralded {
                states.push(s);
            }
        }
        records.push(rec);
    }
    let mitigation = match (cfg.mitigate, noise) {
        (true, Some(n)) => Some(TransitionMatrix::from_spam(&n.spam)),
        (true, None) => Some(TransitionMatrix::identity()),
        _ => None,
    };
    let mut report = expectation_report(&records, &mplan, lattice, &ReportOptions { keep_all: cfg.keep_all, mitigation })?;
    report.meta.seed = Some(cfg.seed);
    report.meta.noise = noise.copied();
    report.meta.strategy = Some(strategy.clone());
    Ok(PrepOutcome { report, records, states })
}

#[derive(Clone, Debug)]
pub struct RandomizedConfig {
    pub seed: u64,
    /// Settings (N_U).
    pub n_settings: usize,
    /// Retained shots per setting (N_M).
    pub shots_per_setting: usize,
    /// Keep heralded shots instead of replacing them.
    pub keep_all: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RandomizedStats {
    pub attempts: usize,
    pub heralded: usize,
}

impl RandomizedStats {
    pub fn discard_fraction(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.heralded as f64 / self.attempts as f64
        }
    }
}

/// Stream offset for drawing setting bases, disjoint from shot streams.
const BASES_STREAM: u64 = 1 << 63;
/// Attempts allowed per retained shot before giving up on a setting.
const MAX_ATTEMPTS_PER_SHOT: usize = 50;

/// Random single-qubit Clifford bases of setting `u`.
pub fn setting_bases(seed: u64, u: usize, n: usize) -> Vec<u8> {
    let mut rng = shot_rng(seed, BASES_STREAM | u as u64);
    (0..n).map(|_| rng.gen_range(0..NUM_CLIFFORDS) as u8).collect()
}

fn randomized_readout(bases: &[u8], n_qubits: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits, bases.len());
    for (q, &b) in bases.iter().enumerate() {
        for g in cliffords()[b as usize].gates(q) {
            c.gate(g);
        }
    }
    for q in 0..bases.len() {
        c.measure(q, q);
    }
    c
}

/// Randomized-measurement dataset on the data qubits. Heralded shots are
/// replaced by fresh ones unless `keep_all`.
pub fn collect_randomized(
    plan: &PrepPlan,
    noise: Option<&NoiseSpec>,
    cfg: &RandomizedConfig,
) -> Result<(RandomizedMeasurementDataset, RandomizedStats)> {
    if cfg.shots_per_setting < 2 {
        return Err(Error::TooFewShots(cfg.shots_per_setting));
    }
    let n_data = plan.n_data();
    let ex = Executor::with_noise(noise.copied());
    let per_setting = map_shots(cfg.n_settings as u64, |u| -> Result<(Vec<u8>, Vec<u64>, RandomizedStats)> {
        let bases = setting_bases(cfg.seed, u as usize, n_data);
        let readout = randomized_readout(&bases, plan.n_qubits());
        let mut shots = Vec::with_capacity(cfg.shots_per_setting);
        let mut stats = RandomizedStats::default();
        while shots.len() < cfg.shots_per_setting {
            if stats.attempts >= MAX_ATTEMPTS_PER_SHOT * cfg.shots_per_setting {
                return Err(Error::InvalidArgument(format!("setting {u}: too many heralded shots")));
            }
            let mut shot = plan.run_shot(&ex, cfg.seed, u << 32 | stats.attempts as u64)?;
            stats.attempts += 1;
            if shot.syndrome.heralded {
                stats.heralded += 1;
                if !cfg.keep_all {
                    continue;
                }
            }
            let mut bits = Vec::new();
            ex.run_on(&readout, &mut shot.state, &mut bits, &mut shot.rng)?;
            shots.push(pack(&bits));
        }
        Ok((bases, shots, stats))
    });
    let mut data = RandomizedMeasurementDataset::new(n_data)?;
    let mut total = RandomizedStats::default();
    for r in per_setting {
        let (bases, shots, stats) = r?;
        data.push_setting(bases, shots)?;
        total.attempts += stats.attempts;
        total.heralded += stats.heralded;
    }
    Ok((data, total))
}
