//! Line-oriented text format.
//!
//! ```text
//! # qubits: 2
//! PREPZ 0
//! RY 0 pi/4
//! CX 0 1
//! MZ 1 -> c0
//! COND c0 X 0
//! ```
//!
//! A `# qubits: N` comment is honored as metadata so that circuits with idle
//! trailing qubits survive a round trip; every other comment is ignored.

use super::{Basis, Circuit, CircuitError, Gate, GateOp, Operation};
use std::f64::consts::PI;
use std::fmt::Write as _;

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit = Circuit::new(0);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if let Some(n) = qubit_directive(raw) {
            circuit.n_qubits = circuit.n_qubits.max(n);
            continue;
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let op = parse_op(&tokens, line)?;
        circuit.push(op).map_err(|e| relabel(e, line))?;
    }
    Ok(circuit)
}

fn qubit_directive(raw: &str) -> Option<usize> {
    let rest = raw.trim().strip_prefix('#')?.trim().strip_prefix("qubits:")?;
    rest.trim().parse().ok()
}

fn relabel(e: CircuitError, line: usize) -> CircuitError {
    match e {
        CircuitError::Syntax { message, .. } => CircuitError::Syntax { line, message },
        CircuitError::DuplicateTarget { qubit, .. } => CircuitError::DuplicateTarget { line, qubit },
        CircuitError::UndefinedBit { bit, .. } => CircuitError::UndefinedBit { line, bit },
    }
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_op(tokens: &[&str], line: usize) -> Result<Operation, CircuitError> {
    let head = tokens[0].to_ascii_uppercase();
    match head.as_str() {
        "PREPZ" | "RESET" => {
            expect_len(tokens, 2, line)?;
            let q = parse_qubit(tokens[1], line)?;
            Ok(if head == "PREPZ" {
                Operation::PrepZ(q)
            } else {
                Operation::Reset(q)
            })
        }
        "MZ" | "MX" | "MY" => {
            expect_len(tokens, 4, line)?;
            if tokens[2] != "->" {
                return Err(syntax(line, format!("expected '->', found {:?}", tokens[2])));
            }
            let basis = match head.as_str() {
                "MX" => Basis::X,
                "MY" => Basis::Y,
                _ => Basis::Z,
            };
            Ok(Operation::Measure {
                basis,
                qubit: parse_qubit(tokens[1], line)?,
                bit: parse_bit(tokens[3], line)?,
            })
        }
        "COND" => {
            if tokens.len() < 3 {
                return Err(syntax(line, "COND needs a bit and a gate"));
            }
            let bit = parse_bit(tokens[1], line)?;
            let op = parse_gate(&tokens[2..], line)?;
            Ok(Operation::Cond { bit, op })
        }
        _ => parse_gate(tokens, line).map(Operation::Unitary),
    }
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<GateOp, CircuitError> {
    let head = tokens[0].to_ascii_uppercase();
    let fixed = match head.as_str() {
        "H" => Some(Gate::H),
        "S" => Some(Gate::S),
        "SDG" => Some(Gate::Sdg),
        "X" => Some(Gate::X),
        "Y" => Some(Gate::Y),
        "Z" => Some(Gate::Z),
        _ => None,
    };
    if let Some(gate) = fixed {
        expect_len(tokens, 2, line)?;
        return Ok(GateOp::one(gate, parse_qubit(tokens[1], line)?));
    }
    match head.as_str() {
        "RX" | "RY" | "RZ" => {
            expect_len(tokens, 3, line)?;
            let a = parse_angle(tokens[2], line)?;
            let gate = match head.as_str() {
                "RX" => Gate::RX(a),
                "RY" => Gate::RY(a),
                _ => Gate::RZ(a),
            };
            Ok(GateOp::one(gate, parse_qubit(tokens[1], line)?))
        }
        "CX" | "CY" => {
            expect_len(tokens, 3, line)?;
            let gate = if head == "CX" { Gate::CX } else { Gate::CY };
            Ok(GateOp::two(gate, parse_qubit(tokens[1], line)?, parse_qubit(tokens[2], line)?))
        }
        "MS" => {
            expect_len(tokens, 4, line)?;
            let a = parse_angle(tokens[3], line)?;
            Ok(GateOp::two(Gate::MS(a), parse_qubit(tokens[1], line)?, parse_qubit(tokens[2], line)?))
        }
        "PREPZ" | "RESET" | "MZ" | "MX" | "MY" | "COND" => {
            Err(syntax(line, format!("{head} is not a unitary gate")))
        }
        _ => Err(syntax(line, format!("unknown operation {:?}", tokens[0]))),
    }
}

fn expect_len(tokens: &[&str], n: usize, line: usize) -> Result<(), CircuitError> {
    if tokens.len() == n {
        Ok(())
    } else {
        Err(syntax(
            line,
            format!("{} expects {} operand(s), found {}", tokens[0], n - 1, tokens.len() - 1),
        ))
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<usize, CircuitError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid qubit index {tok:?}")))
}

fn parse_bit(tok: &str, line: usize) -> Result<usize, CircuitError> {
    tok.strip_prefix('c')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| syntax(line, format!("invalid classical bit {tok:?}")))
}

fn parse_angle(tok: &str, line: usize) -> Result<f64, CircuitError> {
    let bad = || syntax(line, format!("invalid angle {tok:?}"));
    let (sign, body) = match tok.strip_prefix('-') {
        Some(rest) if rest.starts_with("pi") => (-1.0, rest),
        _ => (1.0, tok),
    };
    if let Some(rest) = body.strip_prefix("pi") {
        if rest.is_empty() {
            return Ok(sign * PI);
        }
        let k: u32 = rest.strip_prefix('/').and_then(|d| d.parse().ok()).ok_or_else(bad)?;
        if k == 0 {
            return Err(bad());
        }
        return Ok(sign * (PI / k as f64));
    }
    tok.parse::<f64>().ok().filter(|a| a.is_finite()).ok_or_else(bad)
}

fn fmt_angle(a: f64) -> String {
    for k in 1..=64u32 {
        let base = PI / k as f64;
        let body = if k == 1 { "pi".to_string() } else { format!("pi/{k}") };
        if a == base {
            return body;
        }
        if a == -base {
            return format!("-{body}");
        }
    }
    format!("{a:?}")
}

fn fmt_gate(g: &GateOp) -> String {
    let name = g.gate.mnemonic();
    match g.gate {
        Gate::RX(a) | Gate::RY(a) | Gate::RZ(a) => format!("{name} {} {}", g.qubits[0], fmt_angle(a)),
        Gate::MS(a) => format!("{name} {} {} {}", g.qubits[0], g.qubits[1], fmt_angle(a)),
        Gate::CX | Gate::CY => format!("{name} {} {}", g.qubits[0], g.qubits[1]),
        _ => format!("{name} {}", g.qubits[0]),
    }
}

pub fn fmt_op(op: &Operation) -> String {
    match op {
        Operation::PrepZ(q) => format!("PREPZ {q}"),
        Operation::Reset(q) => format!("RESET {q}"),
        Operation::Measure { basis, qubit, bit } => format!("M{basis} {qubit} -> c{bit}"),
        Operation::Unitary(g) => fmt_gate(g),
        Operation::Cond { bit, op } => format!("COND c{bit} {}", fmt_gate(op)),
    }
}

pub fn emit_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# qubits: {}", circuit.n_qubits());
    for op in circuit.ops() {
        out.push_str(&fmt_op(op));
        out.push('\n');
    }
    out
}
