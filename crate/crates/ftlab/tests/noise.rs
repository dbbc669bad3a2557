use ftlab::backend::Backend;
use ftlab::circuit::{Basis, Circuit, Gate, Pauli};
use ftlab::gadgets::build_ft_zero;
use ftlab::noise::{
    inject_fixed, location_kind, noisy_execute, sample_1q_error, sample_2q_error, shot_rng, FaultEvent, LocationKind,
    NoiseError, NoiseParams,
};
use ftlab::stabilizer::Tableau;
use ftlab::statevector::StateVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn within(observed: f64, expected: f64, n: f64, sigmas: f64) -> bool {
    let p = expected / n;
    (observed - expected).abs() <= sigmas * (n * p * (1.0 - p)).sqrt()
}

#[test]
fn one_qubit_channel_is_uniform_over_x_y_z() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, p) = (200_000, 0.1);
    let mut counts: HashMap<Pauli, usize> = HashMap::new();
    for _ in 0..n {
        if let Some(e) = sample_1q_error(p, &mut rng) {
            *counts.entry(e).or_default() += 1;
        }
    }
    assert_eq!(counts.len(), 3);
    for c in counts.values() {
        assert!(within(*c as f64, n as f64 * p / 3.0, n as f64, 3.0), "{counts:?}");
    }
}

#[test]
fn two_qubit_channel_is_uniform_over_fifteen_paulis() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (n, p) = (300_000, 0.15);
    let mut counts: HashMap<(Pauli, Pauli), usize> = HashMap::new();
    for _ in 0..n {
        if let Some(e) = sample_2q_error(p, &mut rng) {
            *counts.entry(e).or_default() += 1;
        }
    }
    assert_eq!(counts.len(), 15);
    assert!(!counts.contains_key(&(Pauli::I, Pauli::I)));
    for c in counts.values() {
        assert!(within(*c as f64, n as f64 * p / 15.0, n as f64, 3.5), "{counts:?}");
    }
}

#[test]
fn fault_count_per_location_kind_matches_rates() {
    let g = build_ft_zero();
    let params = NoiseParams {
        p1: 0.02,
        p2: 0.05,
        pi: 0.01,
        pm: 0.03,
    };
    let shots = 20_000;
    let mut per_kind: HashMap<LocationKind, usize> = HashMap::new();
    for k in 0..shots {
        let mut b = Tableau::zeroed(g.circuit.n_qubits()).unwrap();
        let rec = noisy_execute(&g.circuit, &params, &mut b, &mut shot_rng(5, k)).unwrap();
        for f in rec.faults {
            *per_kind.entry(location_kind(&g.circuit.ops()[f.location])).or_default() += 1;
        }
    }
    let mut locations: HashMap<LocationKind, usize> = HashMap::new();
    for op in g.circuit.ops() {
        *locations.entry(location_kind(op)).or_default() += 1;
    }
    for (kind, n_loc) in locations {
        let p = params.rate(kind);
        let trials = (n_loc * shots as usize) as f64;
        let seen = per_kind.get(&kind).copied().unwrap_or(0) as f64;
        assert!(within(seen, trials * p, trials, 3.0), "{kind:?}: {seen} vs {}", trials * p);
    }
}

#[test]
fn virtual_rotations_are_noiseless() {
    let mut c = Circuit::new(1);
    c.prep_z(0);
    c.gate1(Gate::RZ(0.3), 0);
    c.gate1(Gate::S, 0);
    c.gate1(Gate::Sdg, 0);
    c.gate1(Gate::Z, 0);
    let all = NoiseParams {
        p1: 1.0,
        p2: 1.0,
        pi: 0.0,
        pm: 1.0,
    };
    for k in 0..100 {
        let mut b = StateVector::zeroed(1).unwrap();
        assert!(noisy_execute(&c, &all, &mut b, &mut shot_rng(0, k)).unwrap().faults.is_empty());
    }
    assert_eq!(location_kind(&c.ops()[1]), LocationKind::Noiseless);
}

#[test]
fn measurement_faults_flip_with_two_thirds_of_pm() {
    let mut c = Circuit::new(1);
    c.prep_z(0);
    c.measure(Basis::Z, 0);
    let pm = 0.09;
    let params = NoiseParams { pm, ..NoiseParams::zero() };
    let shots = 100_000u64;
    let flips = (0..shots)
        .filter(|&k| {
            let mut b = Tableau::zeroed(1).unwrap();
            noisy_execute(&c, &params, &mut b, &mut shot_rng(2, k)).unwrap().bits[0]
        })
        .count() as f64;
    assert!(within(flips, shots as f64 * 2.0 * pm / 3.0, shots as f64, 3.0), "{flips}");
}

#[test]
fn zero_noise_draws_no_faults() {
    let g = build_ft_zero();
    for k in 0..50 {
        let mut b = Tableau::zeroed(g.circuit.n_qubits()).unwrap();
        let rec = noisy_execute(&g.circuit, &NoiseParams::zero(), &mut b, &mut shot_rng(1, k)).unwrap();
        assert!(rec.faults.is_empty());
        assert!(g.flag_bits.iter().all(|&f| !rec.bits[f]));
    }
}

#[test]
fn shot_streams_are_reproducible_and_distinct() {
    let a: Vec<u64> = (0..4).map(|_| shot_rng(7, 3).gen()).collect();
    let b: Vec<u64> = (0..4).map(|_| shot_rng(7, 3).gen()).collect();
    assert_eq!(a, b);
    assert_ne!(shot_rng(7, 3).gen::<u64>(), shot_rng(7, 4).gen::<u64>());
    assert_ne!(shot_rng(7, 3).gen::<u64>(), shot_rng(8, 3).gen::<u64>());
}

#[test]
fn fixed_faults_are_applied_and_checked() {
    let mut c = Circuit::new(1);
    c.prep_z(0);
    c.measure(Basis::Z, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let x = [FaultEvent {
        location: 0,
        paulis: vec![(0, Pauli::X)],
    }];
    let mut b = Tableau::zeroed(1).unwrap();
    assert!(inject_fixed(&c, &x, &mut b, &mut rng).unwrap().bits[0]);
    // a Z before a Z measurement leaves the outcome alone
    let z = [FaultEvent {
        location: 1,
        paulis: vec![(0, Pauli::Z)],
    }];
    let mut b = Tableau::zeroed(1).unwrap();
    assert!(!inject_fixed(&c, &z, &mut b, &mut rng).unwrap().bits[0]);
    let far = [FaultEvent {
        location: 5,
        paulis: vec![(0, Pauli::X)],
    }];
    assert_eq!(
        inject_fixed(&c, &far, &mut b, &mut rng).unwrap_err(),
        NoiseError::LocationOutOfRange { location: 5, len: 2 }
    );
}

#[test]
fn invalid_rates_are_rejected() {
    let bad = NoiseParams { p2: 1.5, ..NoiseParams::default() };
    assert!(matches!(bad.validate(), Err(NoiseError::InvalidRate { name: "p2", .. })));
    assert!(NoiseParams::default().validate().is_ok());
    assert_eq!(NoiseParams::default().scaled(0.5).p2, 0.0125);
}
