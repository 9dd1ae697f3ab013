//! Circuit IR: gates, mid-circuit measurements, resets and classically
//! conditioned Pauli corrections.

mod exec;
mod native;
mod text;

pub use exec::{execute, Executor, Run};
pub use native::{compile_to_native, NativeGateCounts};
pub use text::{parse, serialize};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::Pauli;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// XOR of the listed clbits equals `value`.
    Parity { clbits: Vec<usize>, value: bool },
    /// The listed clbits, read as a little-endian integer, equal `value`.
    Equals { clbits: Vec<usize>, value: u64 },
}

impl Condition {
    pub fn clbits(&self) -> &[usize] {
        match self {
            Condition::Parity { clbits, .. } | Condition::Equals { clbits, .. } => clbits,
        }
    }

    pub fn holds(&self, bits: &[bool]) -> bool {
        match self {
            Condition::Parity { clbits, value } => clbits.iter().fold(false, |acc, &c| acc ^ bits[c]) == *value,
            Condition::Equals { clbits, value } => {
                clbits.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (bits[c] as u64) << i) == *value
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    Gate(Gate),
    Measure { qubit: usize, clbit: usize },
    Reset(usize),
    /// Single-qubit Pauli applied iff the condition holds.
    Conditional { condition: Condition, gate: Gate },
}

impl Instruction {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::Gate(g) | Instruction::Conditional { gate: g, .. } => g.qubits(),
            Instruction::Measure { qubit, .. } | Instruction::Reset(qubit) => vec![*qubit],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit { n_qubits, n_clbits, instructions: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn push(&mut self, inst: Instruction) -> &mut Self {
        self.instructions.push(inst);
        self
    }

    pub fn gate(&mut self, g: Gate) -> &mut Self {
        self.push(Instruction::Gate(g))
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::H(q))
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::S(q))
    }

    pub fn sdg(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Sdg(q))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::X(q))
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Z(q))
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.gate(Gate::CX(c, t))
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::CZ(a, b))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.push(Instruction::Measure { qubit, clbit })
    }

    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.push(Instruction::Reset(q))
    }

    pub fn if_parity(&mut self, clbits: &[usize], value: bool, gate: Gate) -> &mut Self {
        self.push(Instruction::Conditional { condition: Condition::Parity { clbits: clbits.to_vec(), value }, gate })
    }

    pub fn if_equals(&mut self, clbits: &[usize], value: u64, gate: Gate) -> &mut Self {
        self.push(Instruction::Conditional { condition: Condition::Equals { clbits: clbits.to_vec(), value }, gate })
    }

    /// Appends another circuit's instructions, growing the registers if needed.
    pub fn extend(&mut self, other: &Circuit) -> &mut Self {
        self.n_qubits = self.n_qubits.max(other.n_qubits);
        self.n_clbits = self.n_clbits.max(other.n_clbits);
        self.instructions.extend(other.instructions.iter().cloned());
        self
    }

    /// Checks index ranges, that conditional gates are single-qubit Paulis,
    /// and that conditions only read clbits written earlier.
    pub fn validate(&self) -> Result<()> {
        let mut written = vec![false; self.n_clbits];
        for (i, inst) in self.instructions.iter().enumerate() {
            let qs = inst.qubits();
            for &q in &qs {
                if q >= self.n_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, n: self.n_qubits });
                }
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::RepeatedQubit(qs[0]));
            }
            match inst {
                Instruction::Measure { clbit, .. } => {
                    if *clbit >= self.n_clbits {
                        return Err(Error::InvalidCircuit(format!("clbit {clbit} out of range at instruction {i}")));
                    }
                    written[*clbit] = true;
                }
                Instruction::Conditional { condition, gate } => {
                    if gate.as_pauli().is_none() {
                        return Err(Error::InvalidCircuit(format!(
                            "conditional gate '{gate}' at instruction {i} is not a single-qubit Pauli"
                        )));
                    }
                    if let Condition::Equals { clbits, value } = condition {
                        if clbits.len() < 64 && *value >> clbits.len() != 0 {
                            return Err(Error::InvalidCircuit(format!("condition value {value} too wide")));
                        }
                    }
                    for &c in condition.clbits() {
                        if c >= self.n_clbits || !written[c] {
                            return Err(Error::UnwrittenClbit(c));
                        }
                    }
                }
                Instruction::Gate(_) | Instruction::Reset(_) => {}
            }
        }
        Ok(())
    }

    /// ASAP layer of every instruction, counting only two-qubit gates as
    /// time steps. Two-qubit gates get the layer they occupy (1-based);
    /// everything else gets the current time of its qubit.
    pub fn two_qubit_layers(&self) -> Vec<usize> {
        let mut avail = vec![0usize; self.n_qubits];
        self.instructions
            .iter()
            .map(|inst| {
                let qs = inst.qubits();
                if qs.len() == 2 {
                    let l = avail[qs[0]].max(avail[qs[1]]) + 1;
                    avail[qs[0]] = l;
                    avail[qs[1]] = l;
                    l
                } else {
                    avail[qs[0]]
                }
            })
            .collect()
    }

    /// Number of two-qubit gate layers.
    pub fn depth(&self) -> usize {
        self.two_qubit_layers()
            .iter()
            .zip(&self.instructions)
            .filter(|(_, i)| i.qubits().len() == 2)
            .map(|(l, _)| *l)
            .max()
            .unwrap_or(0)
    }

    pub fn count_two_qubit(&self) -> usize {
        self.instructions.iter().filter(|i| i.qubits().len() == 2).count()
    }

    pub fn count_measurements(&self) -> usize {
        self.instructions.iter().filter(|i| matches!(i, Instruction::Measure { .. })).count()
    }

    /// The same circuit with qubit and clbit indices relabeled.
    pub fn remap(&self, n_qubits: usize, n_clbits: usize, fq: impl Fn(usize) -> usize, fc: impl Fn(usize) -> usize) -> Self {
        let instructions = self
            .instructions
            .iter()
            .map(|inst| match inst {
                Instruction::Gate(g) => Instruction::Gate(g.remap(&fq)),
                Instruction::Measure { qubit, clbit } => Instruction::Measure { qubit: fq(*qubit), clbit: fc(*clbit) },
                Instruction::Reset(q) => Instruction::Reset(fq(*q)),
                Instruction::Conditional { condition, gate } => {
                    let condition = match condition {
                        Condition::Parity { clbits, value } => {
                            Condition::Parity { clbits: clbits.iter().map(|&c| fc(c)).collect(), value: *value }
                        }
                        Condition::Equals { clbits, value } => {
                            Condition::Equals { clbits: clbits.iter().map(|&c| fc(c)).collect(), value: *value }
                        }
                    };
                    Instruction::Conditional { condition, gate: gate.remap(&fq) }
                }
            })
            .collect();
        Circuit { n_qubits, n_clbits, instructions }
    }
}

/// Single-qubit Pauli gate, for building corrections.
pub fn pauli_gate(q: usize, p: Pauli) -> Gate {
    Gate::pauli(q, p).expect("non-identity Pauli")
}
