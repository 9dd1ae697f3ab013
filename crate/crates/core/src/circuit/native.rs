use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::{Circuit, Instruction};
use crate::error::Result;
use crate::gate::Gate;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NativeGateCounts {
    pub n_1q: usize,
    pub n_2q: usize,
    /// Two-qubit gate layers (depth in units of one entangling time step).
    pub depth: usize,
}

/// Rewrites one gate into `U1q` / `Rz` / `RZZ` (time order).
fn lower(g: &Gate) -> Vec<Gate> {
    use Gate::*;
    let rz = |lambda, qubit| Rz { lambda, qubit };
    let u1q = |theta, phi, qubit| U1q { theta, phi, qubit };
    match *g {
        // H = Ry(π/2) · Z up to phase
        H(q) => vec![rz(PI, q), u1q(FRAC_PI_2, FRAC_PI_2, q)],
        S(q) => vec![rz(FRAC_PI_2, q)],
        Sdg(q) => vec![rz(-FRAC_PI_2, q)],
        Z(q) => vec![rz(PI, q)],
        X(q) => vec![u1q(PI, 0.0, q)],
        Y(q) => vec![u1q(PI, FRAC_PI_2, q)],
        CZ(a, b) => vec![Rzz { theta: -FRAC_PI_2, a, b }, rz(FRAC_PI_2, a), rz(FRAC_PI_2, b)],
        CX(c, t) => [lower(&H(t)), lower(&CZ(c, t)), lower(&H(t))].concat(),
        Swap(a, b) => [lower(&CX(a, b)), lower(&CX(b, a)), lower(&CX(a, b))].concat(),
        native => vec![native],
    }
}

/// Compiles every unconditioned gate to the native set. Conditional Paulis,
/// measurements and resets are kept; each applied conditional Pauli is
/// counted as one single-qubit gate.
pub fn compile_to_native(circuit: &Circuit) -> Result<(Circuit, NativeGateCounts)> {
    circuit.validate()?;
    let mut out = Circuit::new(circuit.n_qubits, circuit.n_clbits);
    for inst in &circuit.instructions {
        match inst {
            Instruction::Gate(g) => {
                for h in lower(g) {
                    out.gate(h);
                }
            }
            other => {
                out.push(other.clone());
            }
        }
    }
    let counts = native_counts(&out);
    Ok((out, counts))
}

pub(crate) fn native_counts(c: &Circuit) -> NativeGateCounts {
    let mut n = NativeGateCounts { depth: c.depth(), ..Default::default() };
    for inst in &c.instructions {
        match inst {
            Instruction::Gate(g) | Instruction::Conditional { gate: g, .. } => {
                if g.arity() == 2 {
                    n.n_2q += 1;
                } else {
                    n.n_1q += 1;
                }
            }
            _ => {}
        }
    }
    n
}
