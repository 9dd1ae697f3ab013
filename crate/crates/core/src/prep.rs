//! Measurement-and-feed-forward ground-state preparation.
//!
//! Starting from `|0…0⟩` (all Z-type plaquettes already +1), every
//! X-containing stabilizer is measured, with an ancilla or through one of
//! its own data qubits. The outcomes form a syndrome whose −1 entries are
//! removed by classically conditioned Z corrections. Shots whose syndrome
//! cannot come from any Z-error configuration are heralded for discard.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Executor, Run};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::gf2::BitMatrix;
use crate::lattice::{Lattice, LatticeKind};
use crate::noise::NoiseSpec;
use crate::pauli::{Pauli, PauliOperator};
use crate::rng::shot_rng;
use crate::tableau::StabilizerTableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    /// Dedicated ancilla prepared in `|+⟩`.
    Ancilla,
    /// Ancilla from a shared pool, reset before each reuse.
    AllAncillaReuse,
    /// Measured through a data qubit, with conditional-Z restoration.
    AncillaFree,
    /// Measured through a data qubit without the restoring conditional Z;
    /// a −1 outcome moves the excitation onto a neighboring plaquette.
    AncillaFreeModified,
    /// Not measured; its value follows from the others.
    Inferred,
}

impl CheckMethod {
    fn uses_ancilla(self) -> bool {
        matches!(self, CheckMethod::Ancilla | CheckMethod::AllAncillaReuse)
    }

    fn is_ancilla_free(self) -> bool {
        matches!(self, CheckMethod::AncillaFree | CheckMethod::AncillaFreeModified)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    /// One `ifeq` fan per syndrome pattern, conditioning on the whole
    /// syndrome register.
    LookupQasm2,
    /// Linear decoder: one parity-conditioned Z per data qubit.
    LookupOptimized,
    /// Linear decoder with one X-check left unmeasured.
    InferredParity,
}

/// Maximum ancillas in the reuse pool.
pub const REUSE_POOL: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepStrategy {
    pub plaquette_methods: BTreeMap<usize, CheckMethod>,
    pub decoder: DecoderKind,
}

impl PrepStrategy {
    /// Ancillas where the hardware has room, modified ancilla-free checks
    /// elsewhere.
    pub fn hardware(lattice: &Lattice) -> Self {
        let ancilla: &[usize] = match lattice.kind() {
            LatticeKind::Torus => &[1, 3, 9, 11],
            LatticeKind::Defect => &[1, 3, 4, 5, 6],
        };
        let plaquette_methods = lattice
            .x_containing()
            .iter()
            .map(|p| {
                let m = if ancilla.contains(&p.label) { CheckMethod::Ancilla } else { CheckMethod::AncillaFreeModified };
                (p.label, m)
            })
            .collect();
        PrepStrategy { plaquette_methods, decoder: DecoderKind::LookupQasm2 }
    }

    pub fn optimized(lattice: &Lattice) -> Self {
        PrepStrategy { decoder: DecoderKind::LookupOptimized, ..Self::hardware(lattice) }
    }

    /// Every X-check on a pooled, reset-and-reused ancilla.
    pub fn all_ancilla_reuse(lattice: &Lattice) -> Self {
        let plaquette_methods = lattice.x_containing().iter().map(|p| (p.label, CheckMethod::AllAncillaReuse)).collect();
        PrepStrategy { plaquette_methods, decoder: DecoderKind::LookupOptimized }
    }

    /// The hardware layout with the last ancilla plaquette left unmeasured.
    pub fn inferred(lattice: &Lattice) -> Self {
        let mut s = Self::hardware(lattice);
        if let Some((&label, _)) = s.plaquette_methods.iter().rev().find(|(_, m)| **m == CheckMethod::Ancilla) {
            s.plaquette_methods.insert(label, CheckMethod::Inferred);
        }
        s.decoder = DecoderKind::InferredParity;
        s
    }

    pub fn preset(name: &str, lattice: &Lattice) -> Result<Self> {
        match name {
            "hardware" | "default" => Ok(Self::hardware(lattice)),
            "optimized" => Ok(Self::optimized(lattice)),
            "all_ancilla_reuse" => Ok(Self::all_ancilla_reuse(lattice)),
            "inferred" => Ok(Self::inferred(lattice)),
            other => Err(Error::InvalidStrategy(format!("unknown preset '{other}'"))),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidStrategy(e.to_string()))
    }

    pub fn validate(&self, lattice: &Lattice) -> Result<()> {
        let xs: Vec<usize> = lattice.x_containing().iter().map(|p| p.label).collect();
        let given: Vec<usize> = self.plaquette_methods.keys().copied().collect();
        if xs != given {
            return Err(Error::InvalidStrategy(format!(
                "methods must cover exactly the X-containing plaquettes {xs:?}, got {given:?}"
            )));
        }
        let inferred: Vec<usize> =
            self.plaquette_methods.iter().filter(|(_, m)| **m == CheckMethod::Inferred).map(|(l, _)| *l).collect();
        if inferred.len() > 1 {
            return Err(Error::InvalidStrategy("at most one plaquette may be inferred".into()));
        }
        if self.decoder == DecoderKind::InferredParity && inferred.len() != 1 {
            return Err(Error::InvalidStrategy("inferred_parity decoder needs exactly one inferred plaquette".into()));
        }
        if let Some(&label) = inferred.first() {
            // the skipped check must lie in the group generated by the
            // measured checks and the operators |0…0⟩ already fixes
            let n = lattice.num_qubits();
            let others: Vec<Vec<bool>> = lattice
                .plaquettes()
                .iter()
                .filter(|p| p.label != label)
                .map(|p| p.op.symplectic_bits())
                .chain(lattice.logicals().iter().map(|(_, op)| op.symplectic_bits()))
                .collect();
            let mut with = others.clone();
            with.push(lattice.plaquette(label).unwrap().op.symplectic_bits());
            if BitMatrix::from_bool_rows(2 * n, &with).rank() != BitMatrix::from_bool_rows(2 * n, &others).rank() {
                return Err(Error::InvalidStrategy(format!(
                    "plaquette {label} is independent of the other checks and cannot be inferred"
                )));
            }
        }
        Ok(())
    }
}

/// Ancilla-based check of an arbitrary Pauli stabilizer: ancilla in `|+⟩`,
/// one controlled Pauli per support qubit, Hadamard, Z readout. Clbit 0 ↔
/// outcome +1.
pub fn build_parity_check_ancilla(
    n_qubits: usize,
    n_clbits: usize,
    stabilizer: &PauliOperator,
    ancilla: usize,
    clbit: usize,
    reset_first: bool,
) -> Result<Circuit> {
    let support = stabilizer.support();
    if support.contains(&ancilla) {
        return Err(Error::InvalidArgument(format!("ancilla q{ancilla} overlaps the stabilizer support")));
    }
    let mut c = Circuit::new(n_qubits, n_clbits);
    if reset_first {
        c.reset(ancilla);
    }
    c.h(ancilla);
    for q in support {
        match stabilizer.get(q) {
            Pauli::X => {
                c.cx(ancilla, q);
            }
            Pauli::Z => {
                c.cz(ancilla, q);
            }
            Pauli::Y => {
                c.sdg(q).cx(ancilla, q).s(q);
            }
            Pauli::I => {}
        }
    }
    if stabilizer.phase() == crate::pauli::Phase::MinusOne {
        c.z(ancilla);
    }
    c.h(ancilla).measure(ancilla, clbit);
    c.validate()?;
    Ok(c)
}

/// Ancilla-free X-check measured through `target`: fan out with three CX,
/// read `target` in the X basis, reset it to `|+⟩`, optionally restore the
/// −1 branch with a conditional Z, and uncompute the fan-out.
pub fn build_parity_check_ancilla_free(
    n_qubits: usize,
    n_clbits: usize,
    stabilizer: &PauliOperator,
    target: usize,
    modified: bool,
    clbit: usize,
) -> Result<Circuit> {
    let support = stabilizer.support();
    if !support.contains(&target) {
        return Err(Error::InvalidArgument(format!("target q{target} is not in the stabilizer support")));
    }
    if support.iter().any(|&q| stabilizer.get(q) != Pauli::X) {
        return Err(Error::InvalidArgument("ancilla-free checks need an X-type stabilizer".into()));
    }
    let others: Vec<usize> = support.into_iter().filter(|&q| q != target).collect();
    let mut c = Circuit::new(n_qubits, n_clbits);
    for &q in &others {
        c.cx(target, q);
    }
    c.h(target).measure(target, clbit).reset(target).h(target);
    if !modified {
        c.if_parity(&[clbit], true, Gate::Z(target));
    }
    for &q in others.iter().rev() {
        c.cx(target, q);
    }
    c.validate()?;
    Ok(c)
}

/// Default target of an ancilla-free check: the lowest support qubit whose
/// other X-containing stabilizers are all measured with ancillas, so a
/// displaced excitation is always seen later.
pub fn choose_target(lattice: &Lattice, strategy: &PrepStrategy, label: usize) -> Result<usize> {
    let p = lattice.plaquette(label).ok_or_else(|| Error::InvalidStrategy(format!("no plaquette {label}")))?;
    let xs = lattice.x_containing();
    for q in p.support() {
        let ok = xs.iter().filter(|o| o.label != label && o.op.x_bit(q)).all(|o| {
            strategy.plaquette_methods.get(&o.label).is_some_and(|m| m.uses_ancilla())
        });
        if ok {
            return Ok(q);
        }
    }
    let method = strategy.plaquette_methods[&label];
    if method == CheckMethod::AncillaFree {
        return Ok(p.support()[0]);
    }
    Err(Error::InvalidStrategy(format!("plaquette {label}: no qubit whose neighbors are all ancilla-measured")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub label: usize,
    pub method: CheckMethod,
    pub target: Option<usize>,
    pub ancilla: Option<usize>,
    pub clbit: Option<usize>,
    pub reset_first: bool,
}

/// Syndrome over the measured, non-modified checks. Bit set = outcome −1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome {
    pub labels: Vec<usize>,
    pub bits: Vec<bool>,
    pub heralded: bool,
}

impl Syndrome {
    pub fn pattern(&self) -> u64 {
        self.bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u64) << i)
    }
}

/// Z-string decoder over the data qubits.
#[derive(Clone, Debug)]
pub struct Decoder {
    n_data: usize,
    /// `(label, clbit)` of each syndrome bit, in bit order.
    measured: Vec<(usize, usize)>,
    /// X-part support masks of the measured checks.
    masks: Vec<u64>,
    /// Minimum-weight correction per legal pattern.
    table: Vec<Option<u64>>,
    /// Per data qubit: syndrome bits whose parity decides its Z.
    linear: Vec<u64>,
}

fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Largest data register for exhaustive decoder construction.
const MAX_TABLE_QUBITS: usize = 24;

impl Decoder {
    /// `measured`: syndrome checks with their clbits; `forced`: checks whose
    /// final value is +1 regardless of the outcome (modified ancilla-free).
    pub fn new(lattice: &Lattice, measured: &[(usize, usize)], forced: &[usize]) -> Result<Self> {
        let n = lattice.num_qubits();
        if n > MAX_TABLE_QUBITS {
            return Err(Error::InvalidArgument(format!("decoder table limited to {MAX_TABLE_QUBITS} data qubits")));
        }
        let xmask = |label: usize| -> u64 {
            let p = lattice.plaquette(label).expect("label validated");
            (0..n).filter(|&q| p.op.x_bit(q)).fold(0, |m, q| m | 1 << q)
        };
        let masks: Vec<u64> = measured.iter().map(|&(l, _)| xmask(l)).collect();
        let forced_masks: Vec<u64> = forced.iter().map(|&l| xmask(l)).collect();

        let mut table: Vec<Option<u64>> = vec![None; 1 << masks.len()];
        let mut best_weight = vec![u32::MAX; table.len()];
        for e in 0u64..1 << n {
            if forced_masks.iter().any(|&f| parity(e & f)) {
                continue;
            }
            let s = masks.iter().enumerate().fold(0usize, |acc, (i, &m)| acc | (parity(e & m) as usize) << i);
            let w = e.count_ones();
            if w < best_weight[s] {
                best_weight[s] = w;
                table[s] = Some(e);
            }
        }

        // linear decoder from a reduced basis of the legal patterns
        let k = masks.len();
        let mut legal = BitMatrix::new(k);
        for (s, c) in table.iter().enumerate() {
            if c.is_some() {
                legal.push_row(vec![s as u64]);
            }
        }
        let pivots = legal.rref();
        let mut linear = vec![0u64; n];
        for (row, &p) in pivots.iter().enumerate() {
            let b = legal.row(row)[0] as usize;
            let c = table[b].expect("basis vectors are legal");
            for (q, lin) in linear.iter_mut().enumerate() {
                if c >> q & 1 == 1 {
                    *lin |= 1 << p;
                }
            }
        }
        Ok(Decoder { n_data: n, measured: measured.to_vec(), masks, table, linear })
    }

    pub fn num_bits(&self) -> usize {
        self.measured.len()
    }

    pub fn clbits(&self) -> Vec<usize> {
        self.measured.iter().map(|&(_, c)| c).collect()
    }

    pub fn syndrome(&self, clbits: &[bool]) -> Syndrome {
        let bits: Vec<bool> = self.measured.iter().map(|&(_, c)| clbits[c]).collect();
        let pattern = bits.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
        Syndrome {
            labels: self.measured.iter().map(|&(l, _)| l).collect(),
            bits,
            heralded: self.table[pattern].is_none(),
        }
    }

    pub fn is_legal(&self, pattern: u64) -> bool {
        self.table.get(pattern as usize).is_some_and(|c| c.is_some())
    }

    /// All legal syndrome patterns.
    pub fn legal_patterns(&self) -> Vec<u64> {
        (0..self.table.len() as u64).filter(|&s| self.is_legal(s)).collect()
    }

    /// Lookup-table correction: data qubits receiving Z.
    pub fn decode_lookup(&self, syndrome: &Syndrome) -> Result<Vec<usize>> {
        let s = syndrome.pattern() as usize;
        match self.table.get(s).copied().flatten() {
            Some(e) => Ok((0..self.n_data).filter(|&q| e >> q & 1 == 1).collect()),
            None => Err(Error::Heralded),
        }
    }

    /// Correction of the linear decoder (defined for every pattern, correct
    /// on legal ones).
    pub fn decode_linear(&self, syndrome: &Syndrome) -> Vec<usize> {
        let s = syndrome.pattern();
        (0..self.n_data).filter(|&q| parity(self.linear[q] & s)).collect()
    }

    /// Syndrome a Z-error string would produce.
    pub fn syndrome_of(&self, z_string: u64) -> u64 {
        self.masks.iter().enumerate().fold(0, |acc, (i, &m)| acc | (parity(z_string & m) as u64) << i)
    }

    /// Feed-forward instructions realizing this decoder.
    pub fn feed_forward(&self, kind: DecoderKind, circuit: &mut Circuit) {
        let clbits = self.clbits();
        match kind {
            DecoderKind::LookupQasm2 => {
                for s in 1..self.table.len() {
                    if let Some(e) = self.table[s] {
                        for q in (0..self.n_data).filter(|&q| e >> q & 1 == 1) {
                            circuit.if_equals(&clbits, s as u64, Gate::Z(q));
                        }
                    }
                }
            }
            DecoderKind::LookupOptimized | DecoderKind::InferredParity => {
                for (q, &lin) in self.linear.iter().enumerate() {
                    if lin != 0 {
                        let bits: Vec<usize> = (0..clbits.len()).filter(|&i| lin >> i & 1 == 1).map(|i| clbits[i]).collect();
                        circuit.if_parity(&bits, true, Gate::Z(q));
                    }
                }
            }
        }
    }
}

/// Full preparation layout for one lattice and strategy.
#[derive(Clone, Debug)]
pub struct PrepPlan {
    pub lattice: Lattice,
    pub strategy: PrepStrategy,
    pub checks: Vec<CheckSpec>,
    pub decoder: Decoder,
    /// Fragments, feed-forward and final ancilla resets.
    pub circuit: Circuit,
    pub n_ancillas: usize,
}

impl PrepPlan {
    pub fn new(lattice: &Lattice, strategy: &PrepStrategy) -> Result<Self> {
        strategy.validate(lattice)?;
        let n_data = lattice.num_qubits();
        let methods = &strategy.plaquette_methods;

        // ancilla-free checks first so displaced excitations are seen by
        // the ancilla checks that follow
        let mut order: Vec<(usize, CheckMethod)> =
            methods.iter().filter(|(_, m)| m.is_ancilla_free()).map(|(l, m)| (*l, *m)).collect();
        order.extend(methods.iter().filter(|(_, m)| m.uses_ancilla()).map(|(l, m)| (*l, *m)));

        let dedicated = methods.values().filter(|m| **m == CheckMethod::Ancilla).count();
        let pooled = methods.values().filter(|m| **m == CheckMethod::AllAncillaReuse).count();
        let pool = pooled.min(REUSE_POOL);
        let n_ancillas = dedicated + pool;

        let mut checks = Vec::new();
        let mut next_dedicated = n_data;
        let mut pool_uses = 0usize;
        for (clbit, (label, method)) in order.into_iter().enumerate() {
            let mut spec = CheckSpec { label, method, target: None, ancilla: None, clbit: Some(clbit), reset_first: false };
            match method {
                CheckMethod::Ancilla => {
                    spec.ancilla = Some(next_dedicated);
                    next_dedicated += 1;
                }
                CheckMethod::AllAncillaReuse => {
                    spec.ancilla = Some(n_data + dedicated + pool_uses % pool);
                    spec.reset_first = pool_uses >= pool;
                    pool_uses += 1;
                }
                _ => spec.target = Some(choose_target(lattice, strategy, label)?),
            }
            checks.push(spec);
        }
        for (&label, &method) in methods {
            if method == CheckMethod::Inferred {
                checks.push(CheckSpec { label, method, target: None, ancilla: None, clbit: None, reset_first: false });
            }
        }

        let n_qubits = n_data + n_ancillas;
        let n_clbits = checks.iter().filter(|c| c.clbit.is_some()).count();
        let mut circuit = Circuit::new(n_qubits, n_clbits);
        let mut measured = Vec::new();
        let mut forced = Vec::new();
        for c in &checks {
            let Some(clbit) = c.clbit else { continue };
            let op = widen_op(&lattice.plaquette(c.label).unwrap().op, n_qubits);
            let frag = match c.method {
                CheckMethod::Ancilla | CheckMethod::AllAncillaReuse => {
                    build_parity_check_ancilla(n_qubits, n_clbits, &op, c.ancilla.unwrap(), clbit, c.reset_first)?
                }
                m => build_parity_check_ancilla_free(
                    n_qubits,
                    n_clbits,
                    &op,
                    c.target.unwrap(),
                    m == CheckMethod::AncillaFreeModified,
                    clbit,
                )?,
            };
            circuit.extend(&frag);
            if c.method == CheckMethod::AncillaFreeModified {
                forced.push(c.label);
            } else {
                measured.push((c.label, clbit));
            }
        }
        let decoder = Decoder::new(lattice, &measured, &forced)?;
        decoder.feed_forward(strategy.decoder, &mut circuit);
        for a in n_data..n_qubits {
            circuit.reset(a);
        }
        circuit.validate()?;
        Ok(PrepPlan { lattice: lattice.clone(), strategy: strategy.clone(), checks, decoder, circuit, n_ancillas })
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits
    }

    pub fn n_data(&self) -> usize {
        self.lattice.num_qubits()
    }

    /// Runs one shot of the preparation circuit.
    pub fn run_shot(&self, executor: &Executor, seed: u64, shot: u64) -> Result<PrepShot> {
        let mut rng = shot_rng(seed, shot);
        let Run { state, clbits } = executor.run(&self.circuit, &mut rng)?;
        let syndrome = self.decoder.syndrome(&clbits);
        Ok(PrepShot { state, clbits, syndrome, rng })
    }

    /// Ground state on the full register (ancillas in `|0⟩`).
    pub fn reference_state(&self) -> Result<StabilizerTableau> {
        self.lattice.ground_state(self.n_qubits())
    }
}

pub struct PrepShot {
    pub state: StabilizerTableau,
    pub clbits: Vec<bool>,
    pub syndrome: Syndrome,
    /// The shot's random stream, positioned after the preparation.
    pub rng: crate::rng::ShotRng,
}

pub(crate) fn widen_op(op: &PauliOperator, n: usize) -> PauliOperator {
    crate::lattice::widen(op, n)
}

/// Convenience: plan for a lattice with a named strategy preset.
pub fn plan_for(lattice: &Lattice, preset: &str) -> Result<PrepPlan> {
    PrepPlan::new(lattice, &PrepStrategy::preset(preset, lattice)?)
}

/// Executor for a noise setting.
pub fn executor_for(noise: Option<&NoiseSpec>) -> Executor {
    Executor::with_noise(noise.copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_torus;

    #[test]
    fn torus_targets_and_counts() {
        let t = build_torus(4, 4).unwrap();
        let plan = PrepPlan::new(&t, &PrepStrategy::hardware(&t)).unwrap();
        let targets: Vec<(usize, usize)> =
            plan.checks.iter().filter_map(|c| c.target.map(|q| (c.label, q))).collect();
        assert_eq!(targets, vec![(4, 4), (6, 6), (12, 0), (14, 2)]);
        let ancillas: Vec<usize> = plan.checks.iter().filter_map(|c| c.ancilla).collect();
        assert_eq!(ancillas, vec![16, 17, 18, 19]);
        assert_eq!(plan.circuit.count_two_qubit(), 40);
        assert_eq!(plan.decoder.legal_patterns().len(), 8);
    }

    #[test]
    fn heralding_is_odd_parity_on_torus() {
        let t = build_torus(4, 4).unwrap();
        let plan = PrepPlan::new(&t, &PrepStrategy::hardware(&t)).unwrap();
        for s in 0u64..16 {
            assert_eq!(plan.decoder.is_legal(s), s.count_ones() % 2 == 0, "pattern {s:04b}");
        }
    }

    #[test]
    fn reuse_pool() {
        let t = build_torus(4, 4).unwrap();
        let plan = PrepPlan::new(&t, &PrepStrategy::all_ancilla_reuse(&t)).unwrap();
        assert_eq!(plan.n_ancillas, 4);
        assert_eq!(plan.circuit.count_two_qubit(), 32);
        assert_eq!(plan.checks.iter().filter(|c| c.reset_first).count(), 4);
    }

    #[test]
    fn strategy_validation() {
        let t = build_torus(4, 4).unwrap();
        let mut s = PrepStrategy::hardware(&t);
        s.plaquette_methods.remove(&1);
        assert!(s.validate(&t).is_err());
        assert!(PrepStrategy::inferred(&t).validate(&t).is_ok());
        let mut two = PrepStrategy::inferred(&t);
        two.plaquette_methods.insert(1, CheckMethod::Inferred);
        assert!(two.validate(&t).is_err());
        // the defect lattice keeps a single global relation as well
        let d = crate::lattice::build_defect_lattice();
        assert_eq!(d.stabilizer_rank() + 1, d.plaquettes().len());
        assert!(PrepStrategy::inferred(&d).validate(&d).is_ok());
        let json = r#"{"plaquette_methods":{"1":"ancilla","3":"ancilla","4":"ancilla_free_modified","6":"ancilla_free_modified","9":"ancilla","11":"ancilla","12":"ancilla_free_modified","14":"ancilla_free_modified"},"decoder":"lookup_optimized"}"#;
        let parsed = PrepStrategy::from_json(json).unwrap();
        assert_eq!(parsed, PrepStrategy::optimized(&t));
    }

    #[test]
    fn ancilla_fragment_rejects_overlap() {
        let op = PauliOperator::uniform(5, &[0, 1, 2, 3], Pauli::X).unwrap();
        assert!(build_parity_check_ancilla(5, 1, &op, 2, 0, false).is_err());
        assert!(build_parity_check_ancilla_free(5, 1, &op, 4, true, 0).is_err());
    }
}
