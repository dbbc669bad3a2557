#![allow(dead_code)]

use ftlab::backend::Backend;
use ftlab::circuit::{Basis, Circuit, Gate, GateOp, Operation, Pauli};
use ftlab::noise::{inject_fixed, FaultEvent, ShotRecord};
use ftlab::stabilizer::Tableau;
use ftlab::statevector::StateVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

const BASES: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

fn quarter(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-2i32..=2) as f64 * FRAC_PI_2
}

/// Random Clifford circuit on `n` qubits with preparations, resets,
/// measurements in all three bases and classically controlled gates.
pub fn random_clifford_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.prep_z(q);
    }
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let mut r = rng.gen_range(0..n - 1);
        if r >= q {
            r += 1;
        }
        let op = match rng.gen_range(0..15) {
            0 => GateOp::one(Gate::H, q),
            1 => GateOp::one(Gate::S, q),
            2 => GateOp::one(Gate::Sdg, q),
            3 => GateOp::one([Gate::X, Gate::Y, Gate::Z][rng.gen_range(0..3)], q),
            4 => GateOp::one(Gate::RX(quarter(rng)), q),
            5 => GateOp::one(Gate::RY(quarter(rng)), q),
            6 => GateOp::one(Gate::RZ(quarter(rng)), q),
            7 | 8 => GateOp::two(Gate::CX, q, r),
            9 => GateOp::two(Gate::CY, q, r),
            10 => GateOp::two(Gate::MS(if rng.gen() { FRAC_PI_2 } else { -FRAC_PI_2 }), q, r),
            11 => {
                c.measure(BASES[rng.gen_range(0..3)], q);
                continue;
            }
            12 => {
                c.reset(q);
                continue;
            }
            _ if c.n_classical() > 0 => {
                let bit = rng.gen_range(0..c.n_classical());
                c.cond(bit, GateOp::one([Gate::X, Gate::Y, Gate::Z, Gate::H][rng.gen_range(0..4)], q));
                continue;
            }
            _ => GateOp::one(Gate::H, q),
        };
        c.push(Operation::Unitary(op)).expect("valid op");
    }
    for q in 0..n {
        c.measure(BASES[rng.gen_range(0..3)], q);
    }
    c
}

/// A handful of random Pauli faults at random locations.
pub fn random_faults(rng: &mut impl Rng, c: &Circuit, count: usize) -> Vec<FaultEvent> {
    let mut locs: Vec<usize> = (0..count).map(|_| rng.gen_range(0..c.len())).collect();
    locs.sort_unstable();
    locs.dedup();
    locs.into_iter()
        .map(|location| {
            let paulis = c.ops()[location]
                .targets()
                .iter()
                .map(|&q| (q, Pauli::NON_IDENTITY[rng.gen_range(0..3)]))
                .collect();
            FaultEvent { location, paulis }
        })
        .collect()
}

fn run<B: Backend>(c: &Circuit, faults: &[FaultEvent], seed: u64) -> ShotRecord {
    let mut backend = B::zeroed(c.n_qubits()).expect("register size");
    inject_fixed(c, faults, &mut backend, &mut ChaCha8Rng::seed_from_u64(seed)).expect("valid faults")
}

/// Runs `cases` random circuits of up to 10 qubits on both engines with
/// the same faults and random stream; returns the number of mismatches and
/// the first mismatching case.
pub fn cross_backend_mismatches(cases: usize, seed: u64) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    let mut first = None;
    for k in 0..cases {
        let n = rng.gen_range(2..=10);
        let len = rng.gen_range(5..60);
        let c = random_clifford_circuit(&mut rng, n, len);
        let count = rng.gen_range(0..4);
        let faults = random_faults(&mut rng, &c, count);
        let a = run::<Tableau>(&c, &faults, k as u64);
        let b = run::<StateVector>(&c, &faults, k as u64);
        if a != b {
            bad += 1;
            first.get_or_insert_with(|| format!("case {k}: {n} qubits, {} ops", c.len()));
        }
    }
    (bad, first)
}
