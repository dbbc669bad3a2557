use ftlab::circuit::unitary::{equal_up_to_phase, matrix_1q, matrix_2q};
use ftlab::circuit::{
    compact_qubits, decompose_cnot_to_ms, emit_circuit, expand_to_native, parse_circuit, Basis, Circuit,
    CircuitError, Gate, GateOp, Operation, Pauli, PauliString,
};
use ftlab::gadgets::catalog;
use ftlab::statevector::unitary_of;
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

// Dense matrix of a Pauli string with qubit 0 as the least significant
// tensor factor, matching the state-vector layout.
fn dense(p: &PauliString) -> DMatrix<C> {
    let one = |q: Pauli| -> DMatrix<C> {
        let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
        let v = match q {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &v)
    };
    let mut m = DMatrix::identity(1, 1);
    for q in 0..p.len() {
        m = one(p.get(q)).kronecker(&m);
    }
    let phase = [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][p.phase() as usize];
    m * phase
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(0usize..4, n), 0u8..4).prop_map(|(letters, phase)| {
        let mut p = PauliString::from_letters(&letters.iter().map(|&k| Pauli::ALL[k]).collect::<Vec<_>>());
        p.set_phase(phase);
        p
    })
}

fn close(a: &DMatrix<C>, b: &DMatrix<C>) -> bool {
    (a - b).iter().all(|z| z.norm() < 1e-12)
}

proptest! {
    #[test]
    fn products_match_matrix_oracle((a, b) in (1usize..4).prop_flat_map(|n| (pauli_string(n), pauli_string(n)))) {
        prop_assert!(close(&dense(&a.multiply(&b)), &(dense(&a) * dense(&b))));
    }

    #[test]
    fn commutation_matches_matrix_oracle((a, b) in (1usize..4).prop_flat_map(|n| (pauli_string(n), pauli_string(n)))) {
        let (ma, mb) = (dense(&a), dense(&b));
        prop_assert_eq!(a.commutes_with(&b), close(&(&ma * &mb), &(&mb * &ma)));
    }

    #[test]
    fn text_form_round_trips(p in (1usize..6).prop_flat_map(pauli_string)) {
        let back: PauliString = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn weight_counts_non_identity_factors(p in (1usize..8).prop_flat_map(pauli_string)) {
        let w = (0..p.len()).filter(|&q| p.get(q) != Pauli::I).count();
        prop_assert_eq!(p.weight(), w);
    }
}

#[test]
fn single_qubit_products() {
    let x: PauliString = "X".parse().unwrap();
    let y: PauliString = "Y".parse().unwrap();
    let z: PauliString = "Z".parse().unwrap();
    assert_eq!((&x * &y).to_string(), "+iZ");
    assert_eq!((&y * &x).to_string(), "-iZ");
    assert_eq!((&z * &x).to_string(), "+iY");
    assert_eq!((&y * &z).to_string(), "+iX");
    assert_eq!((&x * &x).to_string(), "+I");
}

#[test]
fn pauli_display_round_trip() {
    for s in ["+XIZY", "-iZZ", "+iI", "-XYZ"] {
        assert_eq!(s.parse::<PauliString>().unwrap().to_string(), s);
    }
    assert!("XQ".parse::<PauliString>().is_err());
}

fn is_unitary(m: &[Vec<C>]) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let s: C = (0..n).map(|k| m[k][i].conj() * m[k][j]).sum();
            (s - if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).norm() < 1e-12
        })
    })
}

#[test]
fn gate_matrices_are_unitary() {
    for g in [Gate::H, Gate::S, Gate::Sdg, Gate::X, Gate::Y, Gate::Z, Gate::RX(0.37), Gate::RY(-1.2), Gate::RZ(PI / 8.0)] {
        let m = matrix_1q(g);
        assert!(is_unitary(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()), "{g:?}");
    }
    for g in [Gate::CX, Gate::CY, Gate::MS(PI / 2.0), Gate::MS(-0.7)] {
        let m = matrix_2q(g);
        assert!(is_unitary(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()), "{g:?}");
    }
}

#[test]
fn state_vector_kernels_agree_with_gate_matrices() {
    let m = matrix_2q(Gate::CY);
    let u = unitary_of(&[GateOp::two(Gate::CY, 0, 1)], 2);
    assert!(equal_up_to_phase(&u, &m.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 1e-12));
    let m = matrix_1q(Gate::RY(0.4));
    let u = unitary_of(&[GateOp::one(Gate::RY(0.4), 0)], 1);
    assert!(equal_up_to_phase(&u, &m.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 1e-12));
}

fn gate_ops(ops: &[Operation]) -> Vec<GateOp> {
    ops.iter()
        .map(|op| match op {
            Operation::Unitary(g) => *g,
            other => panic!("unexpected {other:?}"),
        })
        .collect()
}

#[test]
fn ms_sequence_equals_cnot_for_both_signs_and_orientations() {
    for v in [1, -1] {
        for (c, t) in [(0, 1), (1, 0), (0, 2), (2, 1)] {
            let native = unitary_of(&gate_ops(&decompose_cnot_to_ms(c, t, v)), 3);
            let ideal = unitary_of(&[GateOp::two(Gate::CX, c, t)], 3);
            assert!(equal_up_to_phase(&native, &ideal, 1e-12), "v={v} c={c} t={t}");
        }
    }
}

#[test]
fn native_expansion_keeps_the_unitary_and_uses_only_native_entanglers() {
    let mut c = Circuit::new(3);
    c.h(0);
    c.cx(0, 1);
    c.cy(1, 2);
    c.gate1(Gate::RY(PI / 4.0), 2);
    c.cx(2, 0);
    let native = expand_to_native(&c, -1);
    assert!(native.ops().iter().all(|op| match op {
        Operation::Unitary(g) => !matches!(g.gate, Gate::CX | Gate::CY),
        _ => true,
    }));
    assert_eq!(native.two_qubit_gate_count(), 3);
    assert!(equal_up_to_phase(&unitary_of(&gate_ops(c.ops()), 3), &unitary_of(&gate_ops(native.ops()), 3), 1e-12));
}

#[test]
fn every_catalog_circuit_survives_the_text_format() {
    for g in catalog() {
        let text = emit_circuit(&g.circuit);
        assert_eq!(parse_circuit(&text).unwrap(), g.circuit, "{}", g.name);
        let native = expand_to_native(&g.circuit, 1);
        assert_eq!(parse_circuit(&emit_circuit(&native)).unwrap(), native, "{} native", g.name);
    }
}

#[test]
fn text_angles_and_measurements() {
    let c = parse_circuit("# qubits: 3\nPREPZ 0\nRY 0 pi/4\nRZ 1 -0.25\nMS 0 2 -pi/2\nMY 0 -> c0\nCOND c0 X 1\n").unwrap();
    assert_eq!(c.n_qubits(), 3);
    assert_eq!(c.n_classical(), 1);
    assert_eq!(c.ops()[1], Operation::Unitary(GateOp::one(Gate::RY(PI / 4.0), 0)));
    assert_eq!(c.ops()[2], Operation::Unitary(GateOp::one(Gate::RZ(-0.25), 1)));
    assert_eq!(c.ops()[3], Operation::Unitary(GateOp::two(Gate::MS(-FRAC_PI_2), 0, 2)));
    assert_eq!(c.ops()[4], Operation::Measure { basis: Basis::Y, qubit: 0, bit: 0 });
    let mut d = Circuit::new(1);
    d.gate1(Gate::RZ(0.3), 0);
    d.gate1(Gate::RX(-PI / 8.0), 0);
    assert_eq!(parse_circuit(&emit_circuit(&d)).unwrap(), d);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_circuit("# header\nH 0\n\nCX 1 1\n").unwrap_err();
    assert_eq!(err, CircuitError::DuplicateTarget { line: 4, qubit: 1 });
    assert!(matches!(parse_circuit("H 0\nCOND c3 X 0\n"), Err(CircuitError::UndefinedBit { line: 2, bit: 3 })));
    assert!(matches!(parse_circuit("FOO 1\n"), Err(CircuitError::Syntax { line: 1, .. })));
    assert!(matches!(parse_circuit("RY 0 pi/0\n"), Err(CircuitError::Syntax { line: 1, .. })));
}

#[test]
fn compaction_preserves_locations_and_bits() {
    for g in catalog() {
        let (c, slots) = compact_qubits(&g.circuit);
        assert_eq!(c.len(), g.circuit.len(), "{}", g.name);
        assert_eq!(c.n_classical(), g.circuit.n_classical());
        assert!(c.n_qubits() <= g.circuit.n_qubits());
        assert_eq!(slots.len(), g.circuit.n_qubits());
        for (a, b) in c.ops().iter().zip(g.circuit.ops()) {
            assert_eq!(a.out_bit(), b.out_bit());
            assert_eq!(std::mem::discriminant(a), std::mem::discriminant(b));
        }
    }
}
