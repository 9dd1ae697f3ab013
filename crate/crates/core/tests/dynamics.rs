//! Anyon moves, QND tracing and braiding on the defect lattice.

use topoff_core::dynamics::{
    braid_circuit, run_braid_interferometry, run_qnd_trace, run_transmutation, Checkpoint, CheckpointMode,
    DynamicsConfig, DynamicsScript, Move, ScriptStep, BRAID_LOOP, FERMION_SITE, QND_PLAQUETTES,
};
use topoff_core::lattice::{build_defect_lattice, build_torus, AnyonConfig};
use topoff_core::prep::PrepStrategy;
use topoff_core::{Error, NoiseSpec, Pauli, PauliOperator};

fn defect() -> (topoff_core::Lattice, PrepStrategy) {
    let l = build_defect_lattice();
    let s = PrepStrategy::hardware(&l);
    (l, s)
}

/// Sign of every stabilizer after a Pauli string, from commutation alone.
fn commutation_signs(lattice: &topoff_core::Lattice, moves: &[(Pauli, usize)]) -> Vec<(usize, i8)> {
    let n = lattice.num_qubits();
    lattice
        .plaquettes()
        .iter()
        .map(|p| {
            let flips = moves
                .iter()
                .filter(|&&(letter, q)| !p.op.commutes(&PauliOperator::single(n, q, letter).unwrap()))
                .count();
            (p.label, if flips % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

#[test]
fn noiseless_transmutation_matches_the_algebra() {
    let (lattice, strategy) = defect();
    let steps = run_transmutation(&lattice, &strategy, None, &DynamicsScript::transmutation(), &DynamicsConfig::new(1, 4))
        .unwrap();
    assert_eq!(steps.len(), 4);
    let moves = [(Pauli::X, 12), (Pauli::X, 13), (Pauli::Z, 6), (Pauli::Z, 5)];
    for (k, step) in steps.iter().enumerate() {
        let signs = commutation_signs(&lattice, &moves[..=k]);
        for (label, sign) in signs {
            assert_eq!(step.expected.sign(label), Some(sign));
            let e = &step.report.stabilizers[&label];
            assert_eq!(e.mean, sign as f64, "step {k} p{label}");
            assert_eq!(e.std_err, 0.0);
        }
    }
    let last = steps.last().unwrap();
    assert_eq!(last.measured_flipped.len(), 2);
    assert_eq!(last.measured_flipped, last.expected.excited());
    // one electric and one magnetic excitation remain
    let kinds: Vec<bool> =
        last.measured_flipped.iter().map(|&l| lattice.plaquette(l).unwrap().has_x_part()).collect();
    assert!(kinds.contains(&true));
    assert_eq!(steps[0].expected.excited(), vec![8, 12]);
}

#[test]
fn bystanders_stay_put() {
    let (lattice, strategy) = defect();
    let steps = run_transmutation(&lattice, &strategy, None, &DynamicsScript::transmutation(), &DynamicsConfig::new(2, 4))
        .unwrap();
    let touched = [12, 13, 6, 5];
    for p in lattice.plaquettes() {
        if p.support().iter().any(|q| touched.contains(q)) {
            continue;
        }
        for step in &steps {
            assert_eq!(step.report.stabilizers[&p.label].mean, 1.0);
        }
    }
}

#[test]
fn torus_moves_create_excitations_in_pairs() {
    let torus = build_torus(4, 4).unwrap();
    let script = DynamicsScript {
        steps: [(Pauli::X, 5), (Pauli::Z, 9), (Pauli::Y, 0)]
            .into_iter()
            .flat_map(|(p, q)| {
                [
                    ScriptStep::Move(Move::new(p, q)),
                    ScriptStep::Checkpoint(Checkpoint {
                        mode: CheckpointMode::Destructive,
                        plaquettes: vec![],
                        ancillas: vec![],
                        repeats: 1,
                    }),
                ]
            })
            .collect(),
    };
    let steps = run_transmutation(&torus, &PrepStrategy::hardware(&torus), None, &script, &DynamicsConfig::new(3, 2)).unwrap();
    for step in steps {
        assert_eq!(step.measured_flipped.len() % 2, 0);
        assert_eq!(step.measured_flipped, step.expected.excited());
    }
}

#[test]
fn noiseless_qnd_trace_follows_the_anyon() {
    let (lattice, strategy) = defect();
    let trace = run_qnd_trace(&lattice, &strategy, None, &DynamicsScript::qnd_trace(), 4, 40).unwrap();
    assert_eq!(trace.kept, 40);
    // −1 moves from 12 onto the defect, then onto the X plaquette next to it
    let flipped: Vec<Vec<usize>> = trace
        .expected
        .iter()
        .map(|cp| cp.iter().filter(|(_, &v)| v < 0).map(|(&l, _)| l).collect())
        .collect();
    assert_eq!(flipped, vec![vec![8, 12], vec![6, 8], vec![1, 8]]);
    for r in &trace.records {
        for (k, cp) in r.checkpoints.iter().enumerate() {
            for (l, outcomes) in cp {
                assert_eq!(outcomes, &vec![trace.expected[k][l]]);
            }
        }
        // final destructive readout agrees with the three moves
        let after = AnyonConfig::after(
            &lattice,
            &PauliOperator::from_sparse(15, &[(12, Pauli::X), (13, Pauli::X), (6, Pauli::Z)]).unwrap(),
        );
        assert!(!r.final_stabilizers.is_empty());
        for (l, v) in &r.final_stabilizers {
            assert_eq!(Some(*v), after.sign(*l), "p{l}");
        }
    }
}

#[test]
fn repeated_qnd_checks_agree_even_with_noise() {
    let (lattice, strategy) = defect();
    let script = DynamicsScript {
        steps: vec![
            ScriptStep::Move(Move::new(Pauli::X, 12)),
            ScriptStep::Checkpoint(Checkpoint {
                mode: CheckpointMode::Qnd,
                plaquettes: QND_PLAQUETTES.to_vec(),
                ancillas: vec![],
                repeats: 2,
            }),
        ],
    };
    let trace = run_qnd_trace(&lattice, &strategy, None, &script, 5, 50).unwrap();
    for r in &trace.records {
        for outcomes in r.checkpoints[0].values() {
            assert_eq!(outcomes.len(), 2);
            assert_eq!(outcomes[0], outcomes[1]);
        }
    }
    // with gate noise repetitions mostly agree, but not always
    let noisy = run_qnd_trace(&lattice, &strategy, Some(&NoiseSpec::h1_1()), &script, 5, 400).unwrap();
    let (mut same, mut total) = (0, 0);
    for r in &noisy.records {
        for o in r.checkpoints[0].values() {
            total += 1;
            same += (o[0] == o[1]) as usize;
        }
    }
    assert!(same as f64 / total as f64 > 0.95);
}

#[test]
fn qnd_needs_enough_ancillas() {
    let torus = build_torus(4, 4).unwrap();
    let err = run_qnd_trace(&torus, &PrepStrategy::hardware(&torus), None, &DynamicsScript::qnd_trace(), 0, 1).unwrap_err();
    assert_eq!(err, Error::AncillaShortage { needed: 5, available: 4 });
}

#[test]
fn one_trajectory_replaces_one_batch_per_step() {
    let qnd = DynamicsScript::qnd_trace();
    let moves: Vec<ScriptStep> = qnd.steps.iter().filter(|s| matches!(s, ScriptStep::Move(_))).cloned().collect();
    let destructive = DynamicsScript {
        steps: moves
            .into_iter()
            .flat_map(|m| {
                [
                    m,
                    ScriptStep::Checkpoint(Checkpoint {
                        mode: CheckpointMode::Destructive,
                        plaquettes: vec![],
                        ancillas: vec![],
                        repeats: 1,
                    }),
                ]
            })
            .collect(),
    };
    assert_eq!(qnd.preparations_per_trajectory(), 1);
    assert_eq!(destructive.preparations_per_trajectory(), 3);
}

#[test]
fn braid_phases_are_exact_without_noise() {
    let (lattice, strategy) = defect();
    let cfg = DynamicsConfig::new(6, 50);
    let with = run_braid_interferometry(&lattice, &strategy, true, None, &cfg).unwrap();
    let without = run_braid_interferometry(&lattice, &strategy, false, None, &cfg).unwrap();
    assert_eq!(with.ancilla_z.mean, -1.0);
    assert_eq!(without.ancilla_z.mean, 1.0);
    assert_eq!(with.ancilla_z.mean, -without.ancilla_z.mean);
    // four entangling gates, one per loop site
    let c = braid_circuit(20, 15, true);
    assert_eq!(c.count_two_qubit(), BRAID_LOOP.len());
    // the loop operator is itself a stabilizer; the fermion anticommutes with it
    let z = PauliOperator::uniform(15, &BRAID_LOOP, Pauli::Z).unwrap();
    let y = PauliOperator::single(15, FERMION_SITE, Pauli::Y).unwrap();
    assert!(lattice.plaquettes().iter().any(|p| p.op == z));
    assert!(!z.commutes(&y));
}

#[test]
fn braiding_needs_the_defect_lattice() {
    let torus = build_torus(4, 4).unwrap();
    assert!(run_braid_interferometry(&torus, &PrepStrategy::hardware(&torus), true, None, &DynamicsConfig::new(0, 1))
        .is_err());
}
