//! Circuit intermediate representation shared by every engine.
//!
//! A [`Circuit`] is an ordered list of [`Operation`]s. The position of an
//! operation in that list is its *location*, the address used by the noise
//! model and the fault-tolerance verifier.

mod decompose;
pub(crate) mod pauli;
mod text;
pub mod unitary;

pub use decompose::{decompose_cnot_to_ms, expand_to_native};
pub use pauli::{Pauli, PauliString};
pub use text::{emit_circuit, parse_circuit};

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use thiserror::Error;

/// Tolerance used when deciding whether an angle is a multiple of pi/2.
const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        })
    }
}

/// Unitary gate kinds. Rotation angles are in radians.
///
/// `MS(theta)` is the Molmer-Sorensen interaction `exp(-i theta/2 X(x)X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    RX(f64),
    RY(f64),
    RZ(f64),
    CX,
    CY,
    MS(f64),
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::CX | Gate::CY | Gate::MS(_) => 2,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::RX(a) | Gate::RY(a) | Gate::RZ(a) | Gate::MS(a) => Some(a),
            _ => None,
        }
    }

    /// Z-axis rotations are frame updates in software and carry no noise.
    pub fn is_virtual(&self) -> bool {
        matches!(self, Gate::RZ(_) | Gate::S | Gate::Sdg | Gate::Z)
    }

    /// Number of quarter turns (mod 4) for rotation gates whose angle is a
    /// multiple of pi/2, `None` for other angles and for fixed gates.
    pub fn quarter_turns(&self) -> Option<u8> {
        let a = self.angle()?;
        let k = (a / FRAC_PI_2).round();
        if (a - k * FRAC_PI_2).abs() > ANGLE_TOL {
            return None;
        }
        Some((k as i64).rem_euclid(4) as u8)
    }

    pub fn is_clifford(&self) -> bool {
        self.angle().is_none() || self.quarter_turns().is_some()
    }

    pub fn is_pauli(&self) -> bool {
        matches!(self, Gate::X | Gate::Y | Gate::Z)
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H => "H",
            Gate::S => "S",
            Gate::Sdg => "SDG",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::RX(_) => "RX",
            Gate::RY(_) => "RY",
            Gate::RZ(_) => "RZ",
            Gate::CX => "CX",
            Gate::CY => "CY",
            Gate::MS(_) => "MS",
        }
    }
}

/// A gate bound to its target qubits. For one-qubit gates `qubits[1]` is unused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOp {
    pub gate: Gate,
    pub qubits: [usize; 2],
}

impl GateOp {
    pub fn one(gate: Gate, q: usize) -> Self {
        debug_assert_eq!(gate.arity(), 1);
        GateOp { gate, qubits: [q, q] }
    }

    pub fn two(gate: Gate, a: usize, b: usize) -> Self {
        debug_assert_eq!(gate.arity(), 2);
        GateOp { gate, qubits: [a, b] }
    }

    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.gate.arity()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operation {
    PrepZ(usize),
    Reset(usize),
    Measure { basis: Basis, qubit: usize, bit: usize },
    Unitary(GateOp),
    /// Gate applied only when classical `bit` holds outcome -1.
    Cond { bit: usize, op: GateOp },
}

impl Operation {
    pub fn targets(&self) -> &[usize] {
        match self {
            Operation::PrepZ(q) | Operation::Reset(q) => std::slice::from_ref(q),
            Operation::Measure { qubit, .. } => std::slice::from_ref(qubit),
            Operation::Unitary(g) | Operation::Cond { op: g, .. } => g.targets(),
        }
    }

    pub fn out_bit(&self) -> Option<usize> {
        match self {
            Operation::Measure { bit, .. } => Some(*bit),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.targets().len() == 2
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate target qubit {qubit}")]
    DuplicateTarget { line: usize, qubit: usize },
    #[error("line {line}: classical bit c{bit} is read before any measurement writes it")]
    UndefinedBit { line: usize, bit: usize },
}

/// Ordered list of located operations.
///
/// The qubit and classical-bit counts grow automatically as operations are
/// pushed. Builder helpers such as [`Circuit::cx`] panic on malformed
/// operations, which only happens through programming errors in a builder.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    n_classical: usize,
    ops: Vec<Operation>,
    written: Vec<bool>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ..Default::default()
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_classical(&self) -> usize {
        self.n_classical
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Appends an operation and returns its location index.
    ///
    /// Errors report `line` as the 1-based position the operation would have.
    pub fn push(&mut self, op: Operation) -> Result<usize, CircuitError> {
        let line = self.ops.len() + 1;
        let t = op.targets();
        if t.len() == 2 && t[0] == t[1] {
            return Err(CircuitError::DuplicateTarget { line, qubit: t[0] });
        }
        if let Operation::Cond { bit, .. } = op {
            if !self.written.get(bit).copied().unwrap_or(false) {
                return Err(CircuitError::UndefinedBit { line, bit });
            }
        }
        for &q in t {
            self.n_qubits = self.n_qubits.max(q + 1);
        }
        if let Some(bit) = op.out_bit() {
            self.n_classical = self.n_classical.max(bit + 1);
            if self.written.len() <= bit {
                self.written.resize(bit + 1, false);
            }
            self.written[bit] = true;
        }
        self.ops.push(op);
        Ok(self.ops.len() - 1)
    }

    fn add(&mut self, op: Operation) -> usize {
        self.push(op).expect("malformed operation in circuit builder")
    }

    pub fn prep_z(&mut self, q: usize) -> usize {
        self.add(Operation::PrepZ(q))
    }

    pub fn reset(&mut self, q: usize) -> usize {
        self.add(Operation::Reset(q))
    }

    pub fn gate1(&mut self, gate: Gate, q: usize) -> usize {
        self.add(Operation::Unitary(GateOp::one(gate, q)))
    }

    pub fn gate2(&mut self, gate: Gate, a: usize, b: usize) -> usize {
        self.add(Operation::Unitary(GateOp::two(gate, a, b)))
    }

    pub fn h(&mut self, q: usize) -> usize {
        self.gate1(Gate::H, q)
    }

    pub fn cx(&mut self, c: usize, t: usize) -> usize {
        self.gate2(Gate::CX, c, t)
    }

    pub fn cy(&mut self, c: usize, t: usize) -> usize {
        self.gate2(Gate::CY, c, t)
    }

    /// Measures `q` into a freshly allocated classical bit and returns the bit.
    pub fn measure(&mut self, basis: Basis, q: usize) -> usize {
        let bit = self.n_classical;
        self.add(Operation::Measure { basis, qubit: q, bit });
        bit
    }

    pub fn cond(&mut self, bit: usize, op: GateOp) -> usize {
        self.add(Operation::Cond { bit, op })
    }

    /// Appends every operation of `other`, leaving qubit and bit indices as they are.
    pub fn append(&mut self, other: &Circuit) {
        for op in &other.ops {
            self.add(*op);
        }
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Operation::Unitary(g) if g.gate.arity() == 2))
            .count()
    }

    pub fn is_clifford(&self) -> bool {
        self.ops.iter().all(|op| match op {
            Operation::Unitary(g) | Operation::Cond { op: g, .. } => g.gate.is_clifford(),
            _ => true,
        })
    }

    /// Bits written by measurements, in program order.
    pub fn measured_bits(&self) -> Vec<usize> {
        self.ops.iter().filter_map(Operation::out_bit).collect()
    }
}

/// Relabels qubits so that a qubit slot is recycled once its previous owner
/// has been measured for the last time and the next owner starts with a
/// `PREPZ` or `RESET`.
///
/// Returns the compacted circuit and the slot assigned to each original
/// qubit at the end of the circuit. Locations and classical bits are
/// unchanged, so fault addressing carries over. The rewrite is exact for any
/// backend whose preparation is a measure-and-flip, which holds for both
/// engines in this crate.
pub fn compact_qubits(circuit: &Circuit) -> (Circuit, Vec<usize>) {
    let n = circuit.n_qubits();
    let ops = circuit.ops();
    // next_use[i] = index of the next op after i touching the same qubit
    let mut next_use = vec![usize::MAX; ops.len()];
    let mut seen = vec![usize::MAX; n];
    for (i, op) in ops.iter().enumerate().rev() {
        if let [q] = op.targets() {
            next_use[i] = seen[*q];
        }
        for &q in op.targets() {
            seen[q] = i;
        }
    }
    let mut slot_of: Vec<Option<usize>> = vec![None; n];
    let mut last_slot = vec![usize::MAX; n];
    let mut free: std::collections::BTreeSet<usize> = Default::default();
    let mut n_slots = 0usize;
    let mut out = Circuit::new(0);
    for (i, op) in ops.iter().enumerate() {
        for &q in op.targets() {
            if slot_of[q].is_none() {
                let recyclable = matches!(op, Operation::PrepZ(_) | Operation::Reset(_));
                let s = match free.iter().next().copied().filter(|_| recyclable) {
                    Some(s) => {
                        free.remove(&s);
                        s
                    }
                    None => {
                        n_slots += 1;
                        n_slots - 1
                    }
                };
                slot_of[q] = Some(s);
                last_slot[q] = s;
            }
        }
        let map = |q: usize| slot_of[q].expect("slot assigned");
        let mapped = match *op {
            Operation::PrepZ(q) => Operation::PrepZ(map(q)),
            Operation::Reset(q) => Operation::Reset(map(q)),
            Operation::Measure { basis, qubit, bit } => Operation::Measure {
                basis,
                qubit: map(qubit),
                bit,
            },
            Operation::Unitary(g) => Operation::Unitary(remap(g, map)),
            Operation::Cond { bit, op: g } => Operation::Cond { bit, op: remap(g, map) },
        };
        out.push(mapped).expect("relabeling preserves validity");
        if let Operation::Measure { qubit, .. } = *op {
            let nxt = next_use[i];
            let released = nxt == usize::MAX
                || matches!(ops[nxt], Operation::PrepZ(_) | Operation::Reset(_));
            if released {
                free.insert(map(qubit));
                slot_of[qubit] = None;
            }
        }
    }
    out.n_qubits = n_slots;
    (out, last_slot)
}

fn remap(g: GateOp, map: impl Fn(usize) -> usize) -> GateOp {
    let mut h = g;
    for k in 0..g.gate.arity() {
        h.qubits[k] = map(g.qubits[k]);
    }
    if g.gate.arity() == 1 {
        h.qubits[1] = h.qubits[0];
    }
    h
}

/// Elementary Clifford moves used to realize every Clifford gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordStep {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
}

/// Feeds `f` a sequence of elementary steps equal to `op` up to global
/// phase. Returns the gate back as an error when it is not Clifford.
pub fn clifford_steps(op: &GateOp, mut f: impl FnMut(CliffordStep)) -> Result<(), Gate> {
    use CliffordStep as St;
    let (a, b) = (op.qubits[0], op.qubits[1]);
    let turns = op.gate.quarter_turns();
    match (op.gate, turns) {
        (Gate::H, _) => f(St::H(a)),
        (Gate::S, _) => f(St::S(a)),
        (Gate::Sdg, _) => f(St::Sdg(a)),
        (Gate::X, _) => f(St::X(a)),
        (Gate::Y, _) => f(St::Y(a)),
        (Gate::Z, _) => f(St::Z(a)),
        (Gate::CX, _) => f(St::CX(a, b)),
        (Gate::CY, _) => {
            f(St::Sdg(b));
            f(St::CX(a, b));
            f(St::S(b));
        }
        (_, None) => return Err(op.gate),
        (_, Some(0)) => {}
        (Gate::RZ(_), Some(k)) => f([St::S(a), St::Z(a), St::Sdg(a)][k as usize - 1]),
        (Gate::RX(_), Some(2)) => f(St::X(a)),
        (Gate::RX(_), Some(k)) => {
            f(St::H(a));
            f(if k == 1 { St::S(a) } else { St::Sdg(a) });
            f(St::H(a));
        }
        (Gate::RY(_), Some(1)) => {
            f(St::Z(a));
            f(St::H(a));
        }
        (Gate::RY(_), Some(2)) => f(St::Y(a)),
        (Gate::RY(_), Some(_)) => {
            f(St::H(a));
            f(St::Z(a));
        }
        (Gate::MS(_), Some(2)) => {
            f(St::X(a));
            f(St::X(b));
        }
        (Gate::MS(_), Some(k)) => {
            f(St::H(a));
            f(St::H(b));
            f(St::CX(a, b));
            f(if k == 1 { St::S(b) } else { St::Sdg(b) });
            f(St::CX(a, b));
            f(St::H(a));
            f(St::H(b));
        }
    }
    Ok(())
}
