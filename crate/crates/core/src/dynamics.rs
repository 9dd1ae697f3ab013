//! Anyon dynamics on a prepared state: single-qubit moves with
//! destructive or QND checkpoints, and Hadamard-test braiding.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Executor};
use crate::error::{Error, Result};
use crate::estimators::report::{Estimate, ExperimentReport, MeasurementPlan};
use crate::experiment::{prepare_ground_state, PrepRunConfig};
use crate::gate::Gate;
use crate::lattice::{widen, AnyonConfig, Lattice, LatticeKind};
use crate::noise::NoiseSpec;
use crate::pauli::{Pauli, PauliOperator};
use crate::prep::{build_parity_check_ancilla, PrepPlan, PrepStrategy};
use crate::rng::map_shots;

/// A single-qubit Pauli applied to a lattice qubit, written `X12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Move {
    pub pauli: Pauli,
    pub qubit: usize,
}

impl Move {
    pub fn new(pauli: Pauli, qubit: usize) -> Self {
        Move { pauli, qubit }
    }

    pub fn gate(&self) -> Gate {
        Gate::pauli(self.qubit, self.pauli).expect("moves are non-identity")
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.pauli.letter(), self.qubit)
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad move '{s}', expected e.g. X12"));
        let mut chars = s.trim().chars();
        let pauli = chars.next().and_then(Pauli::from_letter).filter(|p| *p != Pauli::I).ok_or_else(bad)?;
        let qubit = chars.as_str().parse().map_err(|_| bad())?;
        Ok(Move { pauli, qubit })
    }
}

impl TryFrom<String> for Move {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Move> for String {
    fn from(m: Move) -> String {
        m.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckpointMode {
    /// Read every stabilizer by collapsing the state (fresh preparation).
    Destructive,
    /// Ancilla parity checks that leave the state in place.
    Qnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub mode: CheckpointMode,
    /// Plaquettes to read; empty means all (destructive only).
    #[serde(default)]
    pub plaquettes: Vec<usize>,
    /// Ancilla per QND plaquette; empty means the register's ancillas in
    /// order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ancillas: Vec<usize>,
    /// QND measurements of each plaquette per checkpoint.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub repeats: usize,
}

fn one() -> usize {
    1
}

fn is_one(v: &usize) -> bool {
    *v == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptStep {
    Move(Move),
    Checkpoint(Checkpoint),
}

/// Ordered moves and checkpoints, applied after the ground-state
/// preparation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsScript {
    pub steps: Vec<ScriptStep>,
}

/// Plaquettes tracked by the QND variant of the transmutation.
pub const QND_PLAQUETTES: [usize; 5] = [1, 4, 6, 8, 12];
/// Moves of the transmutation on the defect lattice.
pub const TRANSMUTATION_MOVES: [(Pauli, usize); 4] = [(Pauli::X, 12), (Pauli::X, 13), (Pauli::Z, 6), (Pauli::Z, 5)];

impl DynamicsScript {
    /// Each transmutation move followed by a destructive readout.
    pub fn transmutation() -> Self {
        let steps = TRANSMUTATION_MOVES
            .iter()
            .flat_map(|&(p, q)| {
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
            .collect();
        DynamicsScript { steps }
    }

    /// The first three moves, each followed by QND checks of
    /// [`QND_PLAQUETTES`], then one destructive readout.
    pub fn qnd_trace() -> Self {
        let mut steps = Vec::new();
        for &(p, q) in &TRANSMUTATION_MOVES[..3] {
            steps.push(ScriptStep::Move(Move::new(p, q)));
            steps.push(ScriptStep::Checkpoint(Checkpoint {
                mode: CheckpointMode::Qnd,
                plaquettes: QND_PLAQUETTES.to_vec(),
                ancillas: vec![],
                repeats: 1,
            }));
        }
        steps.push(ScriptStep::Checkpoint(Checkpoint {
            mode: CheckpointMode::Destructive,
            plaquettes: vec![],
            ancillas: vec![],
            repeats: 1,
        }));
        DynamicsScript { steps }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn checkpoints(&self) -> impl Iterator<Item = &Checkpoint> {
        self.steps.iter().filter_map(|s| match s {
            ScriptStep::Checkpoint(c) => Some(c),
            _ => None,
        })
    }

    /// State preparations one trajectory costs: every destructive
    /// checkpoint consumes the state.
    pub fn preparations_per_trajectory(&self) -> usize {
        self.checkpoints().filter(|c| c.mode == CheckpointMode::Destructive).count().max(1)
    }

    /// Checks qubits, labels and ancilla assignments against a lattice
    /// whose register has `n_qubits` qubits.
    pub fn validate(&self, lattice: &Lattice, n_qubits: usize) -> Result<()> {
        let n_data = lattice.num_qubits();
        for step in &self.steps {
            match step {
                ScriptStep::Move(m) => {
                    if m.qubit >= n_data {
                        return Err(Error::QubitOutOfRange { qubit: m.qubit, n: n_data });
                    }
                }
                ScriptStep::Checkpoint(c) => {
                    if let Some(&l) = c.plaquettes.iter().find(|&&l| lattice.plaquette(l).is_none()) {
                        return Err(Error::InvalidArgument(format!("no plaquette labeled {l}")));
                    }
                    if c.mode == CheckpointMode::Qnd {
                        if c.plaquettes.is_empty() || c.repeats == 0 {
                            return Err(Error::InvalidArgument("QND checkpoint needs plaquettes and repeats ≥ 1".into()));
                        }
                        qnd_ancillas(c, n_data, n_qubits)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ancilla for each plaquette of a QND checkpoint.
fn qnd_ancillas(c: &Checkpoint, n_data: usize, n_qubits: usize) -> Result<Vec<usize>> {
    let available = n_qubits.saturating_sub(n_data);
    if c.ancillas.is_empty() {
        if c.plaquettes.len() > available {
            return Err(Error::AncillaShortage { needed: c.plaquettes.len(), available });
        }
        return Ok((n_data..n_data + c.plaquettes.len()).collect());
    }
    if c.ancillas.len() != c.plaquettes.len() {
        return Err(Error::InvalidArgument(format!(
            "{} ancillas given for {} plaquettes",
            c.ancillas.len(),
            c.plaquettes.len()
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &a in &c.ancillas {
        if a < n_data || a >= n_qubits || !seen.insert(a) {
            return Err(Error::InvalidArgument(format!("qubit {a} is not a free ancilla")));
        }
    }
    Ok(c.ancillas.clone())
}

fn product(moves: &[Move], n: usize) -> Result<PauliOperator> {
    moves.iter().try_fold(PauliOperator::identity(n), |acc, m| Ok(acc.multiply(&PauliOperator::single(n, m.qubit, m.pauli)?)))
}

#[derive(Clone, Debug)]
pub struct DynamicsConfig {
    pub seed: u64,
    /// Shots per readout setting for each destructive step. With the
    /// four-setting defect plan, 600 reads the corner and defect
    /// stabilizers 1200 times and the others 600 times.
    pub shots_per_setting: usize,
    pub keep_all: bool,
}

impl DynamicsConfig {
    pub fn new(seed: u64, shots_per_setting: usize) -> Self {
        DynamicsConfig { seed, shots_per_setting, keep_all: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmutationStep {
    /// Moves applied so far.
    pub moves: Vec<String>,
    pub expected: AnyonConfig,
    /// Stabilizers with a negative measured mean.
    pub measured_flipped: Vec<usize>,
    pub report: ExperimentReport,
}

/// Destructive variant: every destructive checkpoint of the script gets
/// its own fresh batch of preparations with the moves so far applied.
pub fn run_transmutation(
    lattice: &Lattice,
    strategy: &PrepStrategy,
    noise: Option<&NoiseSpec>,
    script: &DynamicsScript,
    cfg: &DynamicsConfig,
) -> Result<Vec<TransmutationStep>> {
    script.validate(lattice, lattice.num_qubits())?;
    let n_settings = MeasurementPlan::for_lattice(lattice)?.settings.len();
    let shots = cfg.shots_per_setting * n_settings;
    let mut moves = Vec::new();
    let mut out = Vec::new();
    for step in &script.steps {
        match step {
            ScriptStep::Move(m) => moves.push(*m),
            ScriptStep::Checkpoint(c) => {
                if c.mode != CheckpointMode::Destructive {
                    return Err(Error::InvalidArgument("destructive runs take destructive checkpoints only".into()));
                }
                let mut post = Circuit::new(lattice.num_qubits(), 0);
                for m in &moves {
                    post.gate(m.gate());
                }
                let mut run = PrepRunConfig::new(cfg.seed, shots);
                run.keep_all = cfg.keep_all;
                run.post_prep = Some(post);
                run.shot_offset = (out.len() as u64) << 40;
                let outcome = prepare_ground_state(lattice, strategy, noise, &run)?;
                let mut report = outcome.report;
                if !c.plaquettes.is_empty() {
                    report.stabilizers.retain(|l, _| c.plaquettes.contains(l));
                }
                let expected = AnyonConfig::after(lattice, &product(&moves, lattice.num_qubits())?);
                let measured_flipped = report.stabilizers.iter().filter(|(_, e)| e.mean < 0.0).map(|(l, _)| *l).collect();
                out.push(TransmutationStep {
                    moves: moves.iter().map(|m| m.to_string()).collect(),
                    expected,
                    measured_flipped,
                    report,
                });
            }
        }
    }
    Ok(out)
}

/// One shot of a QND trajectory; serialized as one JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub shot: u64,
    pub heralded: bool,
    /// Per QND checkpoint: label → outcome of each repeat.
    pub checkpoints: Vec<BTreeMap<usize, Vec<i8>>>,
    /// Readout setting of the final destructive measurement.
    pub final_setting: Option<usize>,
    /// Stabilizers read by that setting.
    pub final_stabilizers: BTreeMap<usize, i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QndTrace {
    /// Moves applied before each QND checkpoint.
    pub moves: Vec<Vec<String>>,
    /// Noiseless expectation per checkpoint.
    pub expected: Vec<BTreeMap<usize, i8>>,
    /// Mean over retained shots (first repeat) per checkpoint.
    pub means: Vec<BTreeMap<usize, Estimate>>,
    pub shots: usize,
    pub kept: usize,
    pub records: Vec<TraceRecord>,
}

struct QndLayout {
    circuits: Vec<Circuit>,
    /// `(checkpoint, label, repeat, clbit)`.
    slots: Vec<(usize, usize, usize, usize)>,
    n_checkpoints: usize,
    final_offset: Option<usize>,
    moves: Vec<Vec<String>>,
    expected: Vec<BTreeMap<usize, i8>>,
}

fn qnd_layout(lattice: &Lattice, plan: &PrepPlan, script: &DynamicsScript) -> Result<QndLayout> {
    let n = plan.n_qubits();
    let n_data = lattice.num_qubits();
    script.validate(lattice, n)?;
    let mut body = Circuit::new(n, 0);
    let mut slots = Vec::new();
    let mut moves: Vec<Move> = Vec::new();
    let mut all_moves = Vec::new();
    let mut expected = Vec::new();
    let mut n_checkpoints = 0;
    let mut has_final = false;
    for step in &script.steps {
        if has_final {
            return Err(Error::InvalidArgument("the destructive checkpoint must come last".into()));
        }
        match step {
            ScriptStep::Move(m) => {
                body.gate(m.gate());
                moves.push(*m);
            }
            ScriptStep::Checkpoint(c) if c.mode == CheckpointMode::Destructive => has_final = true,
            ScriptStep::Checkpoint(c) => {
                let ancillas = qnd_ancillas(c, n_data, n)?;
                for r in 0..c.repeats {
                    for (&label, &anc) in c.plaquettes.iter().zip(&ancillas) {
                        let op = widen(&lattice.plaquette(label).expect("validated").op, n);
                        let clbit = body.n_clbits;
                        let frag = build_parity_check_ancilla(n, clbit + 1, &op, anc, clbit, true)?;
                        body.extend(&frag);
                        slots.push((n_checkpoints, label, r, clbit));
                    }
                }
                let config = AnyonConfig::after(lattice, &product(&moves, n_data)?);
                expected.push(c.plaquettes.iter().map(|&l| (l, config.sign(l).unwrap_or(1))).collect());
                all_moves.push(moves.iter().map(|m| m.to_string()).collect());
                n_checkpoints += 1;
            }
        }
    }
    let final_offset = has_final.then_some(body.n_clbits);
    let circuits = if has_final {
        let mplan = MeasurementPlan::for_lattice(lattice)?;
        (0..mplan.settings.len())
            .map(|u| {
                let readout = mplan.readout_circuit(u, n);
                let off = body.n_clbits;
                let mut c = body.clone();
                c.extend(&readout.remap(n, off + readout.n_clbits, |q| q, |b| b + off));
                c
            })
            .collect()
    } else {
        vec![body]
    };
    Ok(QndLayout { circuits, slots, n_checkpoints, final_offset, moves: all_moves, expected })
}

/// QND variant: one preparation per trajectory, with ancilla parity
/// checks after each move and an optional final destructive readout.
pub fn run_qnd_trace(
    lattice: &Lattice,
    strategy: &PrepStrategy,
    noise: Option<&NoiseSpec>,
    script: &DynamicsScript,
    seed: u64,
    shots: usize,
) -> Result<QndTrace> {
    let plan = PrepPlan::new(lattice, strategy)?;
    let layout = qnd_layout(lattice, &plan, script)?;
    let mplan = MeasurementPlan::for_lattice(lattice)?;
    let ex = Executor::with_noise(noise.copied());
    let n_data = lattice.num_qubits();

    let results = map_shots(shots as u64, |i| -> Result<TraceRecord> {
        let mut shot = plan.run_shot(&ex, seed, i)?;
        let setting = i as usize % layout.circuits.len();
        let mut bits = Vec::new();
        ex.run_on(&layout.circuits[setting], &mut shot.state, &mut bits, &mut shot.rng)?;
        let mut checkpoints = vec![BTreeMap::<usize, Vec<i8>>::new(); layout.n_checkpoints];
        for &(k, label, _, clbit) in &layout.slots {
            checkpoints[k].entry(label).or_default().push(if bits[clbit] { -1 } else { 1 });
        }
        let (final_setting, final_stabilizers) = match layout.final_offset {
            Some(off) => {
                let word = bits[off..off + n_data].iter().enumerate().fold(0u64, |a, (q, &b)| a | (b as u64) << q);
                let values = lattice
                    .plaquettes()
                    .iter()
                    .filter_map(|p| mplan.read_value(setting, &p.op, word).map(|v| (p.label, v)))
                    .collect();
                (Some(setting), values)
            }
            None => (None, BTreeMap::new()),
        };
        Ok(TraceRecord { shot: i, heralded: shot.syndrome.heralded, checkpoints, final_setting, final_stabilizers })
    });
    let records: Vec<TraceRecord> = results.into_iter().collect::<Result<_>>()?;
    let kept: Vec<&TraceRecord> = records.iter().filter(|r| !r.heralded).collect();
    let means = (0..layout.n_checkpoints)
        .map(|k| {
            layout.expected[k]
                .keys()
                .map(|&l| {
                    let v: Vec<f64> = kept.iter().map(|r| r.checkpoints[k][&l][0] as f64).collect();
                    (l, Estimate::from_values(&v))
                })
                .collect()
        })
        .collect();
    Ok(QndTrace {
        moves: layout.moves,
        expected: layout.expected,
        means,
        shots,
        kept: kept.len(),
        records,
    })
}

/// Loop of the controlled string and the site where the fermion is made.
pub const BRAID_LOOP: [usize; 4] = [10, 8, 4, 7];
pub const FERMION_SITE: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidResult {
    pub with_fermion: bool,
    /// `⟨Z⟩` of the ancilla, i.e. `Re⟨ψ|U_braid|ψ⟩`.
    pub ancilla_z: Estimate,
    pub shots: usize,
    pub discard_fraction: f64,
}

/// Hadamard-test circuit on the prepared register: ancilla in `|+⟩`,
/// optional `Y` creating the e–m pair, controlled-Z along the loop, the
/// same `Y` again, then `H` and a Z readout into clbit 0.
pub fn braid_circuit(n_qubits: usize, ancilla: usize, with_fermion: bool) -> Circuit {
    let mut c = Circuit::new(n_qubits, 1);
    c.h(ancilla);
    if with_fermion {
        c.gate(Gate::Y(FERMION_SITE));
    }
    for &q in &BRAID_LOOP {
        c.cz(ancilla, q);
    }
    if with_fermion {
        c.gate(Gate::Y(FERMION_SITE));
    }
    c.h(ancilla).measure(ancilla, 0);
    c
}

pub fn run_braid_interferometry(
    lattice: &Lattice,
    strategy: &PrepStrategy,
    with_fermion: bool,
    noise: Option<&NoiseSpec>,
    cfg: &DynamicsConfig,
) -> Result<BraidResult> {
    if lattice.kind() != LatticeKind::Defect {
        return Err(Error::InvalidArgument("braiding runs on the defect lattice".into()));
    }
    let plan = PrepPlan::new(lattice, strategy)?;
    let n_data = lattice.num_qubits();
    if plan.n_qubits() <= n_data {
        return Err(Error::AncillaShortage { needed: 1, available: 0 });
    }
    let circuit = braid_circuit(plan.n_qubits(), n_data, with_fermion);
    let ex = Executor::with_noise(noise.copied());
    let shots = cfg.shots_per_setting;
    let results = map_shots(shots as u64, |i| -> Result<(bool, f64)> {
        let mut shot = plan.run_shot(&ex, cfg.seed, i)?;
        let mut bits = Vec::new();
        ex.run_on(&circuit, &mut shot.state, &mut bits, &mut shot.rng)?;
        Ok((shot.syndrome.heralded, if bits[0] { -1.0 } else { 1.0 }))
    });
    let mut values = Vec::with_capacity(shots);
    let mut heralded = 0;
    for r in results {
        let (h, v) = r?;
        heralded += h as usize;
        if cfg.keep_all || !h {
            values.push(v);
        }
    }
    Ok(BraidResult {
        with_fermion,
        ancilla_z: Estimate::from_values(&values),
        shots,
        discard_fraction: if shots == 0 { 0.0 } else { heralded as f64 / shots as f64 },
    })
}
