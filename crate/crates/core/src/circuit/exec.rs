use rand::Rng;

use super::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::noise::{apply_readout_flip, sample_gate_error, sample_memory_error, NoiseSpec};
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::StabilizerTableau;

/// Interpreter settings.
#[derive(Clone, Debug, Default)]
pub struct Executor {
    pub noise: Option<NoiseSpec>,
    /// Outcomes to use for random measurements, by measurement ordinal
    /// (`true` = 1). Deterministic outcomes are never overridden.
    pub forced_outcomes: Vec<Option<bool>>,
}

#[derive(Clone, Debug)]
pub struct Run {
    pub state: StabilizerTableau,
    /// Recorded (possibly misread) clbit values.
    pub clbits: Vec<bool>,
}

/// Runs `circuit` from `|0…0⟩`.
pub fn execute<R: Rng + ?Sized>(circuit: &Circuit, noise: Option<&NoiseSpec>, rng: &mut R) -> Result<Run> {
    Executor { noise: noise.copied(), ..Default::default() }.run(circuit, rng)
}

impl Executor {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn with_noise(noise: Option<NoiseSpec>) -> Self {
        Executor { noise, ..Default::default() }
    }

    pub fn run<R: Rng + ?Sized>(&self, circuit: &Circuit, rng: &mut R) -> Result<Run> {
        let mut state = StabilizerTableau::new(circuit.n_qubits)?;
        let mut clbits = vec![false; circuit.n_clbits];
        self.run_on(circuit, &mut state, &mut clbits, rng)?;
        Ok(Run { state, clbits })
    }

    /// Runs `circuit` on an existing state and clbit register, both of
    /// which may be larger than the circuit's.
    pub fn run_on<R: Rng + ?Sized>(
        &self,
        circuit: &Circuit,
        state: &mut StabilizerTableau,
        clbits: &mut Vec<bool>,
        rng: &mut R,
    ) -> Result<()> {
        let n = state.num_qubits();
        if circuit.n_qubits > n {
            return Err(Error::SizeMismatch { expected: circuit.n_qubits, got: n });
        }
        if clbits.len() < circuit.n_clbits {
            clbits.resize(circuit.n_clbits, false);
        }
        let noise = self.noise.as_ref().filter(|s| !s.is_noiseless());
        let layers = circuit.two_qubit_layers();
        let mut clock = vec![0usize; circuit.n_qubits];
        let mut measurement_ordinal = 0;

        for (inst, &layer) in circuit.instructions.iter().zip(&layers) {
            if let Some(spec) = noise {
                for q in inst.qubits() {
                    idle_until(state, spec, &mut clock[q], q, layer, rng)?;
                }
            }
            match inst {
                Instruction::Gate(g) => {
                    state.apply(g)?;
                    if let Some(spec) = noise {
                        gate_noise(state, spec, g, rng)?;
                    }
                }
                Instruction::Measure { qubit, clbit } => {
                    let z = PauliOperator::single(n, *qubit, Pauli::Z)?;
                    let outcome = match self.forced_outcomes.get(measurement_ordinal).copied().flatten() {
                        Some(bit) => state.measure_pauli_forced(&z, if bit { -1 } else { 1 })?,
                        None => state.measure_pauli(&z, rng)?,
                    };
                    measurement_ordinal += 1;
                    let mut bit = outcome < 0;
                    if let Some(spec) = noise {
                        bit = apply_readout_flip(spec, bit, rng);
                    }
                    clbits[*clbit] = bit;
                }
                Instruction::Reset(q) => state.reset(*q, rng)?,
                Instruction::Conditional { condition, gate } => {
                    if let Some(&c) = condition.clbits().iter().find(|&&c| c >= clbits.len()) {
                        return Err(Error::UnwrittenClbit(c));
                    }
                    if condition.holds(clbits) {
                        state.apply(gate)?;
                        if let Some(spec) = noise {
                            gate_noise(state, spec, gate, rng)?;
                        }
                    }
                }
            }
        }
        if let Some(spec) = noise {
            let depth = circuit.depth();
            for (q, c) in clock.iter_mut().enumerate() {
                idle_until(state, spec, c, q, depth, rng)?;
            }
        }
        Ok(())
    }
}

/// Memory errors for every layer in `(clock, layer]`.
fn idle_until<R: Rng + ?Sized>(
    state: &mut StabilizerTableau,
    spec: &NoiseSpec,
    clock: &mut usize,
    q: usize,
    layer: usize,
    rng: &mut R,
) -> Result<()> {
    while *clock < layer {
        *clock += 1;
        if let Some(p) = sample_memory_error(spec, rng) {
            state.apply(&Gate::pauli(q, p).expect("non-identity"))?;
        }
    }
    Ok(())
}

/// Error after a gate. For CX the sampled two-qubit error is taken to occur
/// at the entangling core of `H_t CZ H_t`, so its target factor is
/// conjugated by the trailing Hadamard (X ↔ Z).
fn gate_noise<R: Rng + ?Sized>(state: &mut StabilizerTableau, spec: &NoiseSpec, g: &Gate, rng: &mut R) -> Result<()> {
    let qs = g.qubits();
    let Some(mut err) = sample_gate_error(spec, qs.len(), rng) else {
        return Ok(());
    };
    if let Gate::CX(..) = g {
        err[1] = match err[1] {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
            p => p,
        };
    }
    for (&q, p) in qs.iter().zip(err) {
        if let Some(e) = Gate::pauli(q, p) {
            state.apply(&e)?;
        }
    }
    Ok(())
}
