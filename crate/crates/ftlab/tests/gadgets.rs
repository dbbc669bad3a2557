use ftlab::backend::Backend;
use ftlab::circuit::{compact_qubits, parse_circuit, Circuit, Operation, Pauli, PauliString};
use ftlab::gadgets::*;
use ftlab::noise::{execute_from, shot_rng, ExecOptions, Fixed, ShotRecord};
use ftlab::stabilizer::Tableau;
use ftlab::statevector::StateVector;
use ftlab::steane::fidelity::{logical_fidelity, LogicalExpectations, Target};
use ftlab::steane::{decoded_parity, logical_pauli, STEANE};

/// Runs a circuit noiselessly and returns the final state and record.
fn run_sv(circuit: &Circuit, seed: u64) -> (StateVector, ShotRecord, Vec<usize>) {
    let (compact, slots) = compact_qubits(circuit);
    let mut sv = StateVector::zeroed(compact.n_qubits()).unwrap();
    let mut rec = ShotRecord::default();
    let mut rng = shot_rng(seed, 0);
    execute_from(&compact, 0, &mut sv, &mut Fixed(&[]), &ExecOptions::default(), &mut rec, &mut rng).unwrap();
    (sv, rec, slots)
}

fn expectations<F: Fn(&PauliString) -> f64>(target: Target, regs: &[[usize; 7]], n: usize, ev: F) -> LogicalExpectations {
    let mut e = LogicalExpectations::new();
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let n_log = target.n_logical();
    for k in 1..4usize.pow(n_log as u32) {
        let factors: Vec<Pauli> = (0..n_log).map(|j| letters[(k >> (2 * j)) & 3]).collect();
        let p = logical_pauli(n, regs, &factors);
        e = e.with(&ftlab::steane::fidelity::label(&factors), ev(&p));
    }
    e
}

fn zero_noise_fidelity_sv(g: &Gadget) -> f64 {
    let (sv, rec, slots) = run_sv(&g.circuit, 7);
    for &b in &g.flag_bits {
        assert!(!rec.bits[b], "{}: flag c{b} fired at zero noise", g.name);
    }
    let regs: Vec<[usize; 7]> = g.registers.iter().map(|r| r.map(|q| slots[q])).collect();
    let e = expectations(g.target, &regs, sv.n(), |p| sv.expectation(p));
    logical_fidelity(&e, g.target).unwrap().value
}

fn zero_noise_fidelity_tableau(g: &Gadget) -> f64 {
    let mut t = Tableau::zeroed(g.circuit.n_qubits()).unwrap();
    let mut rec = ShotRecord::default();
    let mut rng = shot_rng(3, 0);
    execute_from(&g.circuit, 0, &mut t, &mut Fixed(&[]), &ExecOptions::default(), &mut rec, &mut rng).unwrap();
    for &b in &g.flag_bits {
        assert!(!rec.bits[b], "{}: flag c{b} fired at zero noise", g.name);
    }
    let e = expectations(g.target, &g.registers, t.n(), |p| t.expectation(p));
    logical_fidelity(&e, g.target).unwrap().value
}

#[test]
fn entangling_gate_counts() {
    assert_eq!(build_nonft_zero().circuit.two_qubit_gate_count(), 8);
    assert_eq!(build_ft_zero().circuit.two_qubit_gate_count(), 11);
    for (input, _) in CNOT_INPUTS {
        let g = build_logical_cnot(input).unwrap();
        assert_eq!(g.circuit.two_qubit_gate_count(), 29);
        assert_eq!(g.circuit.n_qubits(), 16);
    }
}

#[test]
fn encoders_prepare_code_states() {
    for g in [build_nonft_zero(), build_ft_zero()] {
        let t = {
            let mut t = Tableau::zeroed(g.circuit.n_qubits()).unwrap();
            let mut rec = ShotRecord::default();
            execute_from(&g.circuit, 0, &mut t, &mut Fixed(&[]), &ExecOptions::default(), &mut rec, &mut shot_rng(1, 0)).unwrap();
            t
        };
        let n = g.circuit.n_qubits();
        for s in STEANE.x_generators().iter().chain(&STEANE.z_generators()).chain([&STEANE.logical_z()]) {
            let mut p = PauliString::identity(n);
            for (q, l) in s.support() {
                p.set(q, l);
            }
            assert_eq!(t.expectation(&p), 1.0, "{} on {}", s, g.name);
        }
    }
}

#[test]
fn nonft_zero_matches_codeword_superposition() {
    let (sv, _, slots) = run_sv(&build_nonft_zero().circuit, 1);
    assert!(slots.iter().take(7).enumerate().all(|(k, &s)| k == s));
    let amp = 1.0 / 8f64.sqrt();
    let mut ideal = vec![num_complex::Complex64::new(0.0, 0.0); 128];
    for w in STEANE.codewords() {
        ideal[w as usize] = num_complex::Complex64::new(amp, 0.0);
    }
    let ideal = StateVector::from_amplitudes(ideal).unwrap();
    assert!((ideal.inner(&sv).norm() - 1.0).abs() < 1e-10);
}

#[test]
fn nonft_zero_spreads_an_early_x_fault() {
    // X on position 1 just before the CX from position 1 to position 3
    let g = build_nonft_zero();
    let loc = g
        .circuit
        .ops()
        .iter()
        .position(|op| matches!(op, Operation::Unitary(u) if u.qubits == [0, 2]))
        .unwrap();
    let fault = ftlab::noise::FaultEvent { location: loc - 1, paulis: vec![(0, Pauli::X)] };
    let mut t = Tableau::zeroed(7).unwrap();
    ftlab::noise::inject_fixed(&g.circuit, &[fault], &mut t, &mut shot_rng(0, 0)).unwrap();
    // the fault before the final CX equals X on positions 1 and 3 after it,
    // i.e. a weight-2 data error: Z checks on qubits 0 and 2 read -1
    for q in [0usize, 2] {
        assert_eq!(t.expectation(&PauliString::single(7, q, Pauli::Z)), 0.0);
    }
    let mut ideal = Tableau::zeroed(7).unwrap();
    ftlab::noise::inject_fixed(&g.circuit, &[], &mut ideal, &mut shot_rng(0, 0)).unwrap();
    let mut err = PauliString::identity(7);
    err.set(0, Pauli::X);
    err.set(2, Pauli::X);
    ideal.apply_pauli(&err).unwrap();
    for s in ideal.stabilizers() {
        assert_eq!(t.expectation(&s), 1.0, "state differs from X1X3 |0>_L on {s}");
    }
}

#[test]
fn pauli_preparations_reach_their_targets() {
    for ft in [false, true] {
        for s in ["0", "1", "+", "-", "+i", "-i"] {
            let g = build_pauli_prep(s, ft).unwrap();
            let f = zero_noise_fidelity_tableau(&g);
            assert!((f - 1.0).abs() < 1e-9, "{}: F = {f}", g.name);
        }
    }
    assert_eq!(build_pauli_prep("0", true).unwrap().circuit, build_ft_zero().circuit);
    assert!(build_pauli_prep("2", true).is_err());
}

#[test]
fn logical_cnot_truth_table() {
    for (input, target) in CNOT_INPUTS {
        let g = build_logical_cnot(input).unwrap();
        assert_eq!(g.target, target);
        let f = zero_noise_fidelity_tableau(&g);
        assert!((f - 1.0).abs() < 1e-9, "{input}: F = {f}");
        assert!(is_transversal_between(&g.circuit, &g.registers[0], &g.registers[1]));
    }
    assert!(build_logical_cnot("+-").is_err());
}

#[test]
fn magic_stages_prepare_h() {
    let g = build_magic_nonft();
    assert!((zero_noise_fidelity_sv(&g) - 1.0).abs() < 1e-9);
    for stage in MagicStage::ALL {
        let g = build_magic(stage);
        assert!((zero_noise_fidelity_sv(&g) - 1.0).abs() < 1e-9, "{}", g.name);
    }
}

#[test]
fn hadamard_measurement_preserves_h_and_rejects_its_partner() {
    let magic = build_magic_nonft();
    let mh = build_hadamard_measurement();
    let mut c = magic.circuit.clone();
    c.append(&mh.circuit);
    c.prep_z(7);
    let (sv, rec, _) = run_sv(&c, 11);
    assert!(mh.flag_bits.iter().all(|&b| !rec.bits[b]));
    let (before, _, _) = run_sv(&magic.circuit, 11);
    let keep: Vec<usize> = (0..7).collect();
    let a = StateVector::from_amplitudes(before.extract_register(&keep).unwrap()).unwrap();
    let b = StateVector::from_amplitudes(sv.extract_register(&keep).unwrap()).unwrap();
    assert!((a.inner(&b).norm() - 1.0).abs() < 1e-10);

    // Y_L |H>_L is the -1 eigenstate of the logical Hadamard
    let mut c = magic.circuit.clone();
    for q in 0..7 {
        c.gate1(ftlab::circuit::Gate::Y, q);
    }
    c.append(&mh.circuit);
    for seed in 0..5 {
        let (_, rec, _) = run_sv(&c, seed);
        assert!(rec.bits[mh.flag_bits[0]], "syndrome ancilla must read -1");
    }
}

#[test]
fn ed_block_accepts_codewords_and_catches_single_x() {
    let ed = build_ed_block();
    assert_eq!(ed.flag_bits.len(), 12);
    let prep = build_nonft_zero();
    let mut c = prep.circuit.clone();
    c.append(&ed.circuit);
    let mut t = Tableau::zeroed(c.n_qubits()).unwrap();
    let rec = ftlab::noise::inject_fixed(&c, &[], &mut t, &mut shot_rng(0, 0)).unwrap();
    assert!(ed.flag_bits.iter().all(|&b| !rec.bits[b]));
    for q in 0..7 {
        let fault = ftlab::noise::FaultEvent { location: prep.circuit.len() - 1, paulis: vec![(q, Pauli::X)] };
        let mut t = Tableau::zeroed(c.n_qubits()).unwrap();
        let rec = ftlab::noise::inject_fixed(&c, &[fault], &mut t, &mut shot_rng(0, 0)).unwrap();
        assert!(ed.flag_bits.iter().any(|&b| rec.bits[b]), "X on {q} undetected");
    }
}

/// Decoded A outcome and the post-R logical Bloch vector of block B.
fn injection_branch(g: &Gadget, seed: u64) -> (i8, [f64; 3]) {
    let (sv, rec, slots) = run_sv(&g.circuit, seed);
    assert!(g.flag_bits.iter().all(|&b| !rec.bits[b]));
    let inj = g.injection.as_ref().unwrap();
    let bits: u8 = inj.y_bits.iter().enumerate().map(|(k, &b)| (rec.bits[b] as u8) << k).sum();
    let y_l = if decoded_parity(bits) { 1 } else { -1 };
    let reg = [g.registers[0].map(|q| slots[q])];
    let ev = |p: Pauli| sv.expectation(&logical_pauli(sv.n(), &reg, &[p]));
    let (x, y, z) = (ev(Pauli::X), ev(Pauli::Y), ev(Pauli::Z));
    let v = if y_l == inj.r_on { [z, y, -x] } else { [x, y, z] };
    (y_l, v)
}

#[test]
fn t_injection_outputs_agree_on_both_branches() {
    for s in ["0", "1", "+", "+i"] {
        let g = build_t_injection(s).unwrap();
        let (c0, terms) = g.target.formula();
        let mut seen = [false; 2];
        for seed in 0..40 {
            let (y, v) = injection_branch(&g, seed);
            seen[(y == 1) as usize] = true;
            let mut f = c0;
            for (l, c) in &terms {
                f += c * match *l {
                    "X1" => v[0],
                    "Y1" => v[1],
                    _ => v[2],
                };
            }
            assert!((f - 1.0).abs() < 1e-9, "{s}: branch {y} gives F = {f}");
            if seen[0] && seen[1] {
                break;
            }
        }
        assert!(seen[0] && seen[1], "{s}: both branches must occur");
    }
}

#[test]
fn gadgets_round_trip_through_text() {
    for g in catalog() {
        let text = g.to_text();
        let parsed = parse_circuit(&text).unwrap();
        assert_eq!(parsed.ops(), g.circuit.ops(), "{}", g.name);
        assert_eq!(parsed.n_qubits(), g.circuit.n_qubits());
        assert!(text.starts_with(&format!("# gadget: {}", g.name)));
    }
}

#[test]
fn every_flag_bit_is_written_once() {
    for g in catalog() {
        let measured = g.circuit.measured_bits();
        for &b in &g.flag_bits {
            assert_eq!(measured.iter().filter(|&&m| m == b).count(), 1, "{}", g.name);
        }
        let data = g.data_qubits();
        for op in g.circuit.ops() {
            if let Operation::Measure { qubit, bit, .. } = op {
                if g.flag_bits.contains(bit) {
                    assert!(!data.contains(qubit) || g.injection.is_some());
                }
            }
        }
    }
}

#[test]
fn catalog_names_are_unique_and_components_are_marked() {
    let all = catalog();
    let mut names: Vec<&str> = all.iter().map(|g| g.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), all.len());
    let components: Vec<&str> = all.iter().filter(|g| g.is_component()).map(|g| g.name.as_str()).collect();
    assert_eq!(components, COMPONENTS);
    assert!(by_name("magic_ed").is_some_and(|g| !g.is_component()));
}
