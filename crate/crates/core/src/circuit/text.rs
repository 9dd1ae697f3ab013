//! Line-based circuit text format.
//!
//! ```text
//! qubits 20
//! clbits 8
//! h q3
//! cz q0 q5
//! rzz(-1.5707963267948966) q0 q5
//! measure q2 -> c4
//! reset q2
//! ifxor c1 c3 == 1 : z q7
//! ifeq c0 c1 == 2 : z q7   # register value, c0 is the low bit
//! ```

use std::fmt::Write as _;

use super::{Circuit, Condition, Instruction};
use crate::error::{Error, Result};
use crate::gate::Gate;

pub fn serialize(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "qubits {}", c.n_qubits).unwrap();
    writeln!(s, "clbits {}", c.n_clbits).unwrap();
    for inst in &c.instructions {
        match inst {
            Instruction::Gate(g) => writeln!(s, "{g}"),
            Instruction::Measure { qubit, clbit } => writeln!(s, "measure q{qubit} -> c{clbit}"),
            Instruction::Reset(q) => writeln!(s, "reset q{q}"),
            Instruction::Conditional { condition, gate } => {
                let (kw, bits, value) = match condition {
                    Condition::Parity { clbits, value } => ("ifxor", clbits, (*value as u64).to_string()),
                    Condition::Equals { clbits, value } => ("ifeq", clbits, value.to_string()),
                };
                let bits: Vec<String> = bits.iter().map(|b| format!("c{b}")).collect();
                writeln!(s, "{kw} {} == {value} : {gate}", bits.join(" "))
            }
        }
        .unwrap();
    }
    s
}

struct LineParser {
    line: usize,
}

impl LineParser {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    fn index(&self, tok: &str, prefix: char) -> Result<usize> {
        tok.strip_prefix(prefix)
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err(format!("expected {prefix}<index>, found '{tok}'")))
    }

    fn angle(&self, tok: &str) -> Result<f64> {
        tok.trim().parse().map_err(|_| self.err(format!("bad angle '{tok}'")))
    }

    /// Splits `name(args)` into the name and its comma-separated arguments.
    fn head<'a>(&self, tok: &'a str) -> Result<(&'a str, Vec<&'a str>)> {
        match tok.split_once('(') {
            None => Ok((tok, Vec::new())),
            Some((name, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| self.err("unclosed '('"))?;
                Ok((name, inner.split(',').collect()))
            }
        }
    }

    fn gate(&self, toks: &[&str]) -> Result<Gate> {
        let (name, args) = self.head(toks.first().ok_or_else(|| self.err("missing gate"))?)?;
        let qs: Vec<usize> = toks[1..].iter().map(|t| self.index(t, 'q')).collect::<Result<_>>()?;
        let want = |nq: usize, na: usize| -> Result<()> {
            if qs.len() != nq || args.len() != na {
                Err(self.err(format!("'{name}' takes {nq} qubit(s) and {na} angle(s)")))
            } else {
                Ok(())
            }
        };
        let g = match name {
            "h" | "s" | "sdg" | "x" | "y" | "z" => {
                want(1, 0)?;
                let q = qs[0];
                match name {
                    "h" => Gate::H(q),
                    "s" => Gate::S(q),
                    "sdg" => Gate::Sdg(q),
                    "x" => Gate::X(q),
                    "y" => Gate::Y(q),
                    _ => Gate::Z(q),
                }
            }
            "cx" | "cz" | "swap" => {
                want(2, 0)?;
                match name {
                    "cx" => Gate::CX(qs[0], qs[1]),
                    "cz" => Gate::CZ(qs[0], qs[1]),
                    _ => Gate::Swap(qs[0], qs[1]),
                }
            }
            "u1q" => {
                want(1, 2)?;
                Gate::U1q { theta: self.angle(args[0])?, phi: self.angle(args[1])?, qubit: qs[0] }
            }
            "rz" => {
                want(1, 1)?;
                Gate::Rz { lambda: self.angle(args[0])?, qubit: qs[0] }
            }
            "rzz" => {
                want(2, 1)?;
                Gate::Rzz { theta: self.angle(args[0])?, a: qs[0], b: qs[1] }
            }
            other => return Err(self.err(format!("unknown mnemonic '{other}'"))),
        };
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(self.err(format!("repeated qubit q{}", qs[0])));
        }
        Ok(g)
    }

    fn conditional(&self, kw: &str, rest: &str) -> Result<Instruction> {
        let (cond, gate) = rest.split_once(':').ok_or_else(|| self.err("missing ':' in condition"))?;
        let (bits, value) = cond.split_once("==").ok_or_else(|| self.err("missing '==' in condition"))?;
        let clbits: Vec<usize> = bits.split_whitespace().map(|t| self.index(t, 'c')).collect::<Result<_>>()?;
        if clbits.is_empty() {
            return Err(self.err("condition lists no clbits"));
        }
        let value: u64 = value.trim().parse().map_err(|_| self.err(format!("bad condition value '{}'", value.trim())))?;
        let condition = if kw == "ifxor" {
            if value > 1 {
                return Err(self.err("parity value must be 0 or 1"));
            }
            Condition::Parity { clbits, value: value == 1 }
        } else {
            Condition::Equals { clbits, value }
        };
        let toks: Vec<&str> = gate.split_whitespace().collect();
        let gate = self.gate(&toks)?;
        if gate.as_pauli().is_none() {
            return Err(self.err(format!("conditional gate '{gate}' must be x, y or z")));
        }
        Ok(Instruction::Conditional { condition, gate })
    }
}

/// Parses circuit text. Without `qubits`/`clbits` headers the register
/// sizes are inferred from the largest index used.
pub fn parse(text: &str) -> Result<Circuit> {
    let mut n_qubits: Option<usize> = None;
    let mut n_clbits: Option<usize> = None;
    let mut instructions = Vec::new();
    let mut lines_of = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let p = LineParser { line: i + 1 };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let inst = match toks[0] {
            "qubits" | "clbits" => {
                if toks.len() != 2 || !instructions.is_empty() {
                    return Err(p.err(format!("'{}' header must come first with one count", toks[0])));
                }
                let v = toks[1].parse().map_err(|_| p.err(format!("bad count '{}'", toks[1])))?;
                if toks[0] == "qubits" {
                    n_qubits = Some(v);
                } else {
                    n_clbits = Some(v);
                }
                continue;
            }
            "measure" => {
                if toks.len() != 4 || toks[2] != "->" {
                    return Err(p.err("expected 'measure q<i> -> c<j>'"));
                }
                Instruction::Measure { qubit: p.index(toks[1], 'q')?, clbit: p.index(toks[3], 'c')? }
            }
            "reset" => {
                if toks.len() != 2 {
                    return Err(p.err("expected 'reset q<i>'"));
                }
                Instruction::Reset(p.index(toks[1], 'q')?)
            }
            kw @ ("ifxor" | "ifeq") => p.conditional(kw, line[kw.len()..].trim())?,
            _ => Instruction::Gate(p.gate(&toks)?),
        };
        instructions.push(inst);
        lines_of.push(i + 1);
    }

    let max_q = instructions.iter().flat_map(|i| i.qubits()).max().map_or(0, |q| q + 1);
    let max_c = instructions
        .iter()
        .flat_map(|i| match i {
            Instruction::Measure { clbit, .. } => vec![*clbit],
            Instruction::Conditional { condition, .. } => condition.clbits().to_vec(),
            _ => vec![],
        })
        .max()
        .map_or(0, |c| c + 1);
    let circuit = Circuit { n_qubits: n_qubits.unwrap_or(max_q), n_clbits: n_clbits.unwrap_or(max_c), instructions };

    // range and write-before-read checks with line numbers
    let mut written = vec![false; circuit.n_clbits];
    for (inst, &line) in circuit.instructions.iter().zip(&lines_of) {
        let p = LineParser { line };
        for q in inst.qubits() {
            if q >= circuit.n_qubits {
                return Err(p.err(format!("qubit q{q} out of range ({} qubits)", circuit.n_qubits)));
            }
        }
        match inst {
            Instruction::Measure { clbit, .. } => {
                if *clbit >= circuit.n_clbits {
                    return Err(p.err(format!("clbit c{clbit} out of range ({} clbits)", circuit.n_clbits)));
                }
                written[*clbit] = true;
            }
            Instruction::Conditional { condition, .. } => {
                for &c in condition.clbits() {
                    if c >= circuit.n_clbits || !written[c] {
                        return Err(p.err(format!("condition reads c{c} before it is measured")));
                    }
                }
            }
            _ => {}
        }
    }
    circuit.validate()?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Circuit::new(3, 2);
        c.h(0).cx(0, 1).measure(1, 0).reset(1).measure(2, 1);
        c.if_parity(&[0, 1], true, Gate::Z(2));
        c.if_equals(&[0, 1], 2, Gate::X(0));
        c.gate(Gate::Rzz { theta: -std::f64::consts::FRAC_PI_2, a: 0, b: 2 });
        c.gate(Gate::U1q { theta: 0.1, phi: 0.25, qubit: 1 });
        let text = serialize(&c);
        let back = parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn grammar_examples() {
        let c = parse("measure q0 -> c0\nifxor c0 == 1 : z q0\n").unwrap();
        assert_eq!(
            c.instructions[1],
            Instruction::Conditional { condition: Condition::Parity { clbits: vec![0], value: true }, gate: Gate::Z(0) }
        );
        assert_eq!((c.n_qubits, c.n_clbits), (1, 1));
        let c = parse("# comment\n\ncz q0 q5   # trailing\n").unwrap();
        assert_eq!(c.instructions, vec![Instruction::Gate(Gate::CZ(0, 5))]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("h q0\nqq q0\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, message: "unknown mnemonic 'qq'".into() });
        assert!(matches!(parse("ifxor c0 == 1 : z q0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("measure q0 c0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("qubits 1\nh q3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("measure q0 -> c0\nifxor c0 == 1 : h q0"), Err(Error::Parse { line: 2, .. })));
    }
}
