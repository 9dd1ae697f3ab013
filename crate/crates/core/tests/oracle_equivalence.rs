//! Stabilizer tableau against the dense statevector reference.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoff_core::{Gate, Pauli, PauliOperator, StabilizerTableau};
use topoff_oracle as oracle;
use topoff_oracle::StateVector;

fn apply_dense(sv: &mut StateVector, g: &Gate) {
    use Gate::*;
    match *g {
        H(q) => sv.apply_1q(q, &oracle::mat_h()),
        S(q) => sv.apply_1q(q, &oracle::mat_s()),
        Sdg(q) => sv.apply_1q(q, &oracle::mat_sdg()),
        X(q) => sv.apply_1q(q, &oracle::mat_x()),
        Y(q) => sv.apply_1q(q, &oracle::mat_y()),
        Z(q) => sv.apply_1q(q, &oracle::mat_z()),
        CX(a, b) => sv.apply_2q(a, b, &oracle::mat_cx()),
        CZ(a, b) => sv.apply_2q(a, b, &oracle::mat_cz()),
        Swap(a, b) => sv.apply_2q(a, b, &oracle::mat_swap()),
        U1q { theta, phi, qubit } => sv.apply_1q(qubit, &oracle::mat_u1q(theta, phi)),
        Rz { lambda, qubit } => sv.apply_1q(qubit, &oracle::mat_rz(lambda)),
        Rzz { theta, a, b } => sv.apply_2q(a, b, &oracle::mat_rzz(theta)),
    }
}

fn quarter(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-4i32..8) as f64 * std::f64::consts::FRAC_PI_2
}

fn random_gate(n: usize, rng: &mut ChaCha8Rng) -> Gate {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n);
    if n > 1 {
        while b == a {
            b = rng.gen_range(0..n);
        }
    }
    let kinds = if n > 1 { 12 } else { 8 };
    match rng.gen_range(0..kinds) {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::Sdg(a),
        3 => Gate::X(a),
        4 => Gate::Y(a),
        5 => Gate::Z(a),
        6 => Gate::U1q { theta: quarter(rng), phi: quarter(rng), qubit: a },
        7 => Gate::Rz { lambda: quarter(rng), qubit: a },
        8 => Gate::CX(a, b),
        9 => Gate::CZ(a, b),
        10 => Gate::Swap(a, b),
        _ => Gate::Rzz { theta: quarter(rng), a, b },
    }
}

fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliOperator {
    let factors: Vec<(usize, Pauli)> =
        (0..n).map(|q| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])).collect();
    let p = PauliOperator::from_sparse(n, &factors).unwrap();
    if rng.gen() {
        p.negated()
    } else {
        p
    }
}

fn sign_of(p: &PauliOperator) -> f64 {
    p.phase().sign().unwrap() as f64
}

fn assert_same_state(t: &StabilizerTableau, sv: &StateVector) {
    for s in t.stabilizers() {
        let e = sv.expect_pauli(&s.letters(), sign_of(&s));
        assert!((e - 1.0).abs() < 1e-9, "stabilizer {s} has dense expectation {e}");
    }
}

#[test]
fn random_clifford_circuits_match_dense_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..500 {
        let n = rng.gen_range(1..=6);
        let mut t = StabilizerTableau::new(n).unwrap();
        let mut sv = StateVector::new(n);
        for _ in 0..rng.gen_range(1..40) {
            if rng.gen_ratio(1, 8) {
                let p = random_pauli(n, &mut rng);
                if p.is_identity() {
                    continue;
                }
                let expected = t.expect_pauli(&p).unwrap();
                let dense = sv.expect_pauli(&p.letters(), sign_of(&p));
                assert!((dense - expected as f64).abs() < 1e-9, "case {case}: <{p}> {expected} vs {dense}");
                let outcome = t.measure_pauli(&p, &mut rng).unwrap();
                let prob = sv.project_pauli(&p.letters(), sign_of(&p), outcome);
                let want = if expected == 0 { 0.5 } else { 1.0 };
                assert!((prob - want).abs() < 1e-9, "case {case}: outcome probability {prob}");
            } else {
                let g = random_gate(n, &mut rng);
                t.apply(&g).unwrap();
                apply_dense(&mut sv, &g);
            }
        }
        t.validate().unwrap();
        assert_same_state(&t, &sv);
        for _ in 0..5 {
            let subset: Vec<usize> = (0..n).filter(|_| rng.gen()).collect();
            let exact = t.renyi2_exact(&subset).unwrap();
            let dense = sv.renyi2(&subset);
            assert!((exact - dense).abs() < 1e-9, "case {case}: S2{subset:?} {exact} vs {dense}");
        }
    }
}

#[test]
fn native_clifford_sequences_match_native_unitaries() {
    let angles: Vec<f64> = (-4..8).map(|k| k as f64 * std::f64::consts::FRAC_PI_2).collect();
    let mut natives = Vec::new();
    for &t in &angles {
        natives.push(Gate::Rz { lambda: t, qubit: 0 });
        natives.push(Gate::Rzz { theta: t, a: 0, b: 1 });
        for &p in &angles {
            natives.push(Gate::U1q { theta: t, phi: p, qubit: 0 });
        }
    }
    for g in natives {
        let seq = g.clifford_sequence().unwrap();
        let want = oracle::unitary_of(2, |sv| apply_dense(sv, &g));
        let got = oracle::unitary_of(2, |sv| seq.iter().for_each(|h| apply_dense(sv, h)));
        assert!(oracle::unitaries_equal_up_to_phase(&want, &got, 1e-9), "{g} vs {seq:?}");
    }
}
