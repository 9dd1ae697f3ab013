//! Estimators checked against exact values from independent computations.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoff_core::estimators::purity::{setting_purities, setting_purity, DiagonalCorrection};
use topoff_core::estimators::spam::{spam_apply, spam_mitigate, TransitionMatrix};
use topoff_core::estimators::{
    bootstrap_error, cliffords, purity_estimate, shadow_fidelity, tee, unbiased_square, RandomizedMeasurementDataset,
    NUM_CLIFFORDS,
};
use topoff_core::experiment::{collect_randomized, prepare_ground_state, PrepRunConfig, RandomizedConfig};
use topoff_core::lattice::build_torus;
use topoff_core::noise::Spam;
use topoff_core::prep::{PrepPlan, PrepStrategy};
use topoff_core::rng::shot_rng;
use topoff_core::{Gate, NoiseSpec, Pauli, PauliOperator, StabilizerTableau};
use topoff_oracle as oracle;
use topoff_oracle::StateVector;

fn random_state(n: usize, len: usize, rng: &mut ChaCha8Rng) -> (StabilizerTableau, StateVector) {
    let mut t = StabilizerTableau::new(n).unwrap();
    let mut sv = StateVector::new(n);
    for _ in 0..len {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let g = match rng.gen_range(0..3) {
            0 => {
                sv.apply_1q(a, &oracle::mat_h());
                Gate::H(a)
            }
            1 => {
                sv.apply_1q(a, &oracle::mat_s());
                Gate::S(a)
            }
            _ => {
                sv.apply_2q(a, b, &oracle::mat_cx());
                Gate::CX(a, b)
            }
        };
        t.apply(&g).unwrap();
    }
    (t, sv)
}

/// Randomized-measurement dataset sampled directly from a tableau.
fn sample_dataset(state: &StabilizerTableau, n_u: usize, n_m: usize, seed: u64) -> RandomizedMeasurementDataset {
    let n = state.num_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = RandomizedMeasurementDataset::new(n).unwrap();
    for _ in 0..n_u {
        let bases: Vec<u8> = (0..n).map(|_| rng.gen_range(0..NUM_CLIFFORDS) as u8).collect();
        let mut rotated = state.clone();
        for (q, &b) in bases.iter().enumerate() {
            for g in cliffords()[b as usize].gates(q) {
                rotated.apply(&g).unwrap();
            }
        }
        let shots = (0..n_m)
            .map(|_| {
                let mut s = rotated.clone();
                (0..n).fold(0u64, |acc, q| acc | (s.measure_z(q, &mut rng).unwrap() as u64) << q)
            })
            .collect();
        d.push_setting(bases, shots).unwrap();
    }
    d
}

#[test]
fn overlap_matches_dense_inner_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let (a, va) = random_state(n, 15, &mut rng);
        let (b, vb) = random_state(n, 15, &mut rng);
        let exact = va.inner(&vb).norm_sqr();
        assert!((a.overlap(&b).unwrap() - exact).abs() < 1e-9);
        assert!((a.overlap(&a).unwrap() - 1.0).abs() < 1e-12);
    }
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

proptest! {
    #[test]
    fn spam_round_trip(
        n in 1usize..7,
        p01 in 0.0f64..0.2,
        p10 in 0.0f64..0.2,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = normalized((0..1 << n).map(|_| rng.gen::<f64>()).collect());
        let a = TransitionMatrix::from_spam(&Spam { p01, p10 });
        let mut noisy = dist.clone();
        spam_apply(&mut noisy, n, &a).unwrap();
        prop_assert!((noisy.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        spam_mitigate(&mut noisy, n, &a).unwrap();
        for (x, y) in noisy.iter().zip(&dist) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn tee_is_symmetric_in_the_three_parts(s in proptest::array::uniform7(-3.0f64..3.0), perm in 0usize..6) {
        // entropies are ordered A, B, C, AB, AC, BC, ABC
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let p = orders[perm];
        let single = [s[0], s[1], s[2]];
        let pair = |i: usize, j: usize| match (i.min(j), i.max(j)) {
            (0, 1) => s[3],
            (0, 2) => s[4],
            _ => s[5],
        };
        let t = [
            single[p[0]], single[p[1]], single[p[2]],
            pair(p[0], p[1]), pair(p[0], p[2]), pair(p[1], p[2]),
            s[6],
        ];
        prop_assert!((tee(&s) - tee(&t)).abs() < 1e-12);
    }

    #[test]
    fn dataset_ndjson_round_trip(n in 1usize..10, n_u in 1usize..5, n_m in 2usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = RandomizedMeasurementDataset::new(n).unwrap();
        for _ in 0..n_u {
            let bases = (0..n).map(|_| rng.gen_range(0..NUM_CLIFFORDS) as u8).collect();
            let shots = (0..n_m).map(|_| rng.gen::<u64>() & ((1u64 << n) - 1)).collect();
            d.push_setting(bases, shots).unwrap();
        }
        let mut buf = Vec::new();
        d.write_ndjson(&mut buf).unwrap();
        prop_assert_eq!(RandomizedMeasurementDataset::read_ndjson(&buf[..]).unwrap(), d);
    }
}

#[test]
fn diagonal_correction_is_unbiased() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (state, sv) = random_state(2, 12, &mut rng);
    let exact = sv.probabilities();
    let n_m = 16;
    let resamples = 20_000;
    for (s, &p) in exact.iter().enumerate() {
        let values: Vec<f64> = (0..resamples)
            .map(|_| {
                let hits = (0..n_m)
                    .filter(|_| {
                        let mut t = state.clone();
                        let b0 = t.measure_z(0, &mut rng).unwrap() as usize;
                        let b1 = t.measure_z(1, &mut rng).unwrap() as usize;
                        b0 | b1 << 1 == s
                    })
                    .count();
                unbiased_square(hits as f64 / n_m as f64, n_m)
            })
            .collect();
        let mean = values.iter().sum::<f64>() / resamples as f64;
        let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (resamples - 1) as f64).sqrt();
        let se = sd / (resamples as f64).sqrt();
        assert!((mean - p * p).abs() <= 3.0 * se + 1e-12, "s={s}: {mean} vs {}", p * p);
    }
}

#[test]
fn setting_purity_has_no_finite_shot_bias() {
    // enumerate every count k of outcome 1 among n shots of one bit and weigh
    // the estimate by its binomial probability
    let n = 12usize;
    for q in [0.0f64, 0.1, 0.5, 0.73] {
        let (mut mean, mut diag_only) = (0.0, 0.0);
        let mut choose = 1.0;
        for k in 0..=n {
            if k > 0 {
                choose *= (n - k + 1) as f64 / k as f64;
            }
            let shots: Vec<u64> = (0..n).map(|i| (i < k) as u64).collect();
            let w = choose * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32);
            mean += w * setting_purity(&shots, 1, DiagonalCorrection::Unbiased).unwrap();
            diag_only += w * setting_purity(&shots, 1, DiagonalCorrection::DiagonalOnly).unwrap();
        }
        let p = 1.0 - q;
        let exact = 2.0 * (p * p + q * q - p * q);
        assert!((mean - exact).abs() < 1e-12, "q={q}: {mean} vs {exact}");
        // the cross term -2pq is shrunk by (n - 1)/n when left uncorrected
        assert!((diag_only - exact - 2.0 * p * q / n as f64).abs() < 1e-12);
    }
}

#[test]
fn purity_error_shrinks_with_more_settings() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (state, _) = random_state(4, 30, &mut rng);
    let subset = [0, 1];
    let exact = (-state.renyi2_exact(&subset).unwrap()).exp();
    let reps = 40;
    let mut last = f64::INFINITY;
    for (k, n_u) in [8, 24, 72, 200].into_iter().enumerate() {
        let mse = (0..reps)
            .map(|r| {
                let d = sample_dataset(&state, n_u, 64, 1000 * k as u64 + r);
                (purity_estimate(&d, &subset).unwrap() - exact).powi(2)
            })
            .sum::<f64>()
            / reps as f64;
        let rmse = mse.sqrt();
        assert!(rmse < last, "N_U={n_u}: rmse {rmse} did not shrink from {last}");
        last = rmse;
    }
}

#[test]
fn single_qubit_purities() {
    // |0⟩ read out in Z every time: Σ (−2)^{−D} P P' over one bit
    let t = StabilizerTableau::new(1).unwrap();
    let mut d = RandomizedMeasurementDataset::new(1).unwrap();
    d.push_setting(vec![0], vec![0; 8]).unwrap();
    assert!((purity_estimate(&d, &[0]).unwrap() - 2.0).abs() < 1e-12);

    // over random bases a pure qubit gives 1 and a maximally mixed one ½
    let pure = sample_dataset(&t, 2000, 16, 6);
    assert!((purity_estimate(&pure, &[0]).unwrap() - 1.0).abs() < 0.05);
    let mut bell = StabilizerTableau::new(2).unwrap();
    bell.apply(&Gate::H(0)).unwrap();
    bell.apply(&Gate::CX(0, 1)).unwrap();
    let d = sample_dataset(&bell, 72, 256, 7);
    let est = purity_estimate(&d, &[0]).unwrap();
    let per = setting_purities(&d, &[0], DiagonalCorrection::Unbiased).unwrap();
    let sigma = bootstrap_error(72, 500, &mut shot_rng(7, 0), |idx| {
        idx.iter().map(|&u| per[u]).sum::<f64>() / idx.len() as f64
    })
    .unwrap();
    assert!((est - 0.5).abs() < 3.0 * sigma, "{est} ± {sigma}");
}

#[test]
fn bootstrap_of_a_fair_coin() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (n_u, n_m) = (72, 256);
    let per_setting: Vec<f64> = (0..n_u)
        .map(|_| (0..n_m).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).sum::<f64>() / n_m as f64)
        .collect();
    let sigma = bootstrap_error(n_u, 1000, &mut rng, |idx| {
        idx.iter().map(|&u| per_setting[u]).sum::<f64>() / idx.len() as f64
    })
    .unwrap();
    let analytic = 1.0 / ((n_u * n_m) as f64).sqrt();
    assert!(sigma > analytic / 2.0 && sigma < analytic * 2.0, "{sigma} vs {analytic}");
    assert_eq!(bootstrap_error(n_u, 100, &mut rng, |_| 3.0).unwrap(), 0.0);
}

fn torus_plan() -> (topoff_core::Lattice, PrepPlan) {
    let lattice = build_torus(4, 4).unwrap();
    let plan = PrepPlan::new(&lattice, &PrepStrategy::hardware(&lattice)).unwrap();
    (lattice, plan)
}

/// Ground state with the `Z_vert` logical flipped by a Y string along a
/// column (it commutes with every plaquette).
fn logical_flipped(gs: &StabilizerTableau) -> StabilizerTableau {
    let mut t = gs.clone();
    t.apply_pauli(&PauliOperator::uniform(16, &[0, 4, 8, 12], Pauli::Y).unwrap()).unwrap();
    t
}

#[test]
fn shadow_fidelity_of_the_noiseless_state() {
    let (lattice, plan) = torus_plan();
    let gs = lattice.ground_state(16).unwrap();
    let flipped = logical_flipped(&gs);
    assert_eq!(gs.overlap(&flipped).unwrap(), 0.0);
    let cfg = RandomizedConfig { seed: 3, n_settings: 4000, shots_per_setting: 4, keep_all: false };
    let (d, stats) = collect_randomized(&plan, None, &cfg).unwrap();
    assert_eq!(stats.heralded, 0);
    let same = shadow_fidelity(&d, &gs).unwrap();
    let other = shadow_fidelity(&d, &flipped).unwrap();
    assert!(same.std_err < 0.3 && other.std_err < 0.3);
    assert!((same.fidelity - 1.0).abs() < 3.0 * same.std_err, "{same:?}");
    assert!(other.fidelity.abs() < 3.0 * other.std_err, "{other:?}");
}

#[test]
fn noisy_shadow_fidelity_tracks_the_exact_overlap() {
    let (lattice, plan) = torus_plan();
    let noise = NoiseSpec::h1_1();
    let reference = plan.reference_state().unwrap();
    let mut cfg = PrepRunConfig::new(11, 2000);
    cfg.retain_states = 2000;
    let out = prepare_ground_state(&lattice, &PrepStrategy::hardware(&lattice), Some(&noise), &cfg).unwrap();
    let exact = out.states.iter().map(|s| s.overlap(&reference).unwrap()).sum::<f64>() / out.states.len() as f64;
    assert!(exact > 0.8 && exact < 0.97, "{exact}");

    let cfg = RandomizedConfig { seed: 12, n_settings: 4000, shots_per_setting: 4, keep_all: false };
    let (d, _) = collect_randomized(&plan, Some(&noise), &cfg).unwrap();
    let est = shadow_fidelity(&d, &lattice.ground_state(16).unwrap()).unwrap();
    assert!((est.fidelity - exact).abs() < 3.0 * est.std_err, "{est:?} vs exact {exact}");
}
