use super::{Circuit, Gate, GateOp, Operation};
use std::f64::consts::FRAC_PI_2;

/// Native-gate sequence for `CX(control, target)`.
///
/// The sequence is `RY_c(pi/2)`, `MS(v pi/2)`, `RX_c(-v pi/2)`,
/// `RX_t(-v pi/2)`, `RY_c(-pi/2)`; it equals CNOT up to a global phase for
/// either sign of `v`.
///
/// # Panics
/// If `control == target` or `v` is not `+1`/`-1`.
pub fn decompose_cnot_to_ms(control: usize, target: usize, v: i8) -> Vec<Operation> {
    assert_ne!(control, target, "CNOT needs distinct qubits");
    assert!(v == 1 || v == -1, "v must be +1 or -1");
    let s = v as f64 * FRAC_PI_2;
    [
        GateOp::one(Gate::RY(FRAC_PI_2), control),
        GateOp::two(Gate::MS(s), control, target),
        GateOp::one(Gate::RX(-s), control),
        GateOp::one(Gate::RX(-s), target),
        GateOp::one(Gate::RY(-FRAC_PI_2), control),
    ]
    .into_iter()
    .map(Operation::Unitary)
    .collect()
}

/// Rewrites every `CX`/`CY` of a circuit into native MS-based sequences.
/// `CY` is wrapped in virtual Z rotations on its target.
pub fn expand_to_native(circuit: &Circuit, v: i8) -> Circuit {
    let mut out = Circuit::new(circuit.n_qubits());
    for op in circuit.ops() {
        match op {
            Operation::Unitary(g) if g.gate == Gate::CX => {
                for o in decompose_cnot_to_ms(g.qubits[0], g.qubits[1], v) {
                    out.push(o).expect("native expansion is well formed");
                }
            }
            Operation::Unitary(g) if g.gate == Gate::CY => {
                let (c, t) = (g.qubits[0], g.qubits[1]);
                out.gate1(Gate::RZ(-FRAC_PI_2), t);
                for o in decompose_cnot_to_ms(c, t, v) {
                    out.push(o).expect("native expansion is well formed");
                }
                out.gate1(Gate::RZ(FRAC_PI_2), t);
            }
            other => {
                out.push(*other).expect("copied operation is well formed");
            }
        }
    }
    out
}
