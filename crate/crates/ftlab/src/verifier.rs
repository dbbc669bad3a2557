//! Single-fault certification of gadgets and malignant-pair counting.
//!
//! Clifford gadgets are analysed with a Pauli frame: a fault is a Pauli
//! pushed through the rest of the circuit, flipping every measurement it
//! anticommutes with. Effects of independent faults combine by XOR, which
//! makes exhaustive pair enumeration cheap.
//!
//! Non-Clifford gadgets are simulated on the state vector with every random
//! measurement branch explored.

use crate::backend::CERTAIN_TOL;
use crate::circuit::{
    clifford_steps, compact_qubits, Basis, Circuit, CliffordStep, Gate, GateOp, Operation, Pauli, PauliString,
};
use crate::gadgets::Gadget;
use crate::noise::{location_kind, FaultEvent, LocationKind, NoiseParams};
use crate::statevector::StateVector;
use crate::steane::fidelity::{parse_label, Target};
use crate::steane::{decode_residual, decoded_parity, weight_mod_stabilizers, STEANE};
use num_complex::Complex64 as C;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VerifyError {
    #[error("gate {0} is not Clifford; use the state-vector mode")]
    NonClifford(String),
    #[error("conditional operations are not supported by the verifier")]
    Conditional,
    #[error("Pauli-frame mode supports at most 64 qubits, got {0}")]
    TooWide(usize),
    #[error("target {0} has no stabilizer description")]
    NonStabilizerTarget(&'static str),
    #[error("state-vector mode supports single-register targets only")]
    MultiRegister,
    #[error("gate injection gadgets are not supported")]
    Injection,
    #[error(transparent)]
    Sim(#[from] crate::backend::SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Flagged,
    Correctable,
    Uncorrectable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaultVerdict {
    pub fault: FaultEvent,
    pub outcome: Outcome,
    /// Lightest stabilizer-equivalent data error, one 7-letter block per
    /// register (Clifford mode).
    pub residual: Option<String>,
    /// Largest per-register weight of `residual`.
    pub residual_weight: Option<u32>,
    /// Smallest decoded readout fidelity over accepted branches
    /// (state-vector mode).
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub flagged: usize,
    pub correctable: usize,
    pub uncorrectable: usize,
    pub inconclusive: usize,
    /// Unflagged faults whose residual is heavier than one qubit on some
    /// register, whether or not it harms the target.
    pub heavy_residuals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub gadget: String,
    pub mode: &'static str,
    pub pass: bool,
    pub counts: Counts,
    pub verdicts: Vec<FaultVerdict>,
}

impl Report {
    fn new(gadget: &str, mode: &'static str, verdicts: Vec<FaultVerdict>) -> Report {
        let mut counts = Counts::default();
        for v in &verdicts {
            match v.outcome {
                Outcome::Flagged => counts.flagged += 1,
                Outcome::Correctable => counts.correctable += 1,
                Outcome::Uncorrectable => counts.uncorrectable += 1,
                Outcome::Inconclusive => counts.inconclusive += 1,
            }
            if v.outcome != Outcome::Flagged && v.residual_weight.is_some_and(|w| w > 1) {
                counts.heavy_residuals += 1;
            }
        }
        Report {
            gadget: gadget.to_string(),
            mode,
            pass: counts.uncorrectable == 0 && counts.inconclusive == 0,
            counts,
            verdicts,
        }
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &FaultVerdict> {
        self.verdicts
            .iter()
            .filter(|v| matches!(v.outcome, Outcome::Uncorrectable | Outcome::Inconclusive))
    }
}

/// A single fault with its probability under the noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFault {
    pub event: FaultEvent,
    pub probability: f64,
}

/// Every single fault of the circuit: 3 Paulis after each noisy
/// single-qubit gate, 15 after each two-qubit gate, an X after every
/// preparation, and an outcome flip before every measurement.
pub fn enumerate_faults(circuit: &Circuit, params: &NoiseParams) -> Vec<WeightedFault> {
    let mut out = Vec::new();
    for (loc, op) in circuit.ops().iter().enumerate() {
        let t = op.targets();
        let mut push = |paulis: Vec<(usize, Pauli)>, probability: f64| {
            out.push(WeightedFault {
                event: FaultEvent { location: loc, paulis },
                probability,
            })
        };
        match (location_kind(op), op) {
            (LocationKind::Noiseless, _) => {}
            (LocationKind::Prep, _) => push(vec![(t[0], Pauli::X)], params.pi),
            (LocationKind::Measure, Operation::Measure { basis, qubit, .. }) => {
                let flip = if *basis == Basis::X { Pauli::Z } else { Pauli::X };
                push(vec![(*qubit, flip)], 2.0 * params.pm / 3.0);
            }
            (LocationKind::OneQubit, _) => {
                for p in Pauli::NON_IDENTITY {
                    push(vec![(t[0], p)], params.p1 / 3.0);
                }
            }
            (LocationKind::TwoQubit, _) => {
                for k in 1..16 {
                    let (a, b) = (Pauli::ALL[k / 4], Pauli::ALL[k % 4]);
                    let paulis = [(t[0], a), (t[1], b)].into_iter().filter(|(_, l)| *l != Pauli::I).collect();
                    push(paulis, params.p2 / 15.0);
                }
            }
            (LocationKind::Measure, _) => unreachable!("measure kind is only assigned to measurements"),
        }
    }
    out
}

/// Net effect of a fault set: flipped classical bits and the final Pauli
/// frame (X and Z bit masks over qubits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Effect {
    pub flips: u128,
    pub x: u64,
    pub z: u64,
}

impl std::ops::BitXor for Effect {
    type Output = Effect;
    fn bitxor(self, o: Effect) -> Effect {
        Effect {
            flips: self.flips ^ o.flips,
            x: self.x ^ o.x,
            z: self.z ^ o.z,
        }
    }
}

fn check_clifford(circuit: &Circuit) -> Result<(), VerifyError> {
    if circuit.n_qubits() > 64 {
        return Err(VerifyError::TooWide(circuit.n_qubits()));
    }
    for op in circuit.ops() {
        match op {
            Operation::Cond { .. } => return Err(VerifyError::Conditional),
            Operation::Unitary(g) if !g.gate.is_clifford() => {
                return Err(VerifyError::NonClifford(g.gate.mnemonic().to_string()))
            }
            _ => {}
        }
    }
    assert!(circuit.n_classical() <= 128, "at most 128 classical bits");
    Ok(())
}

/// Propagates a single fault through the circuit.
pub fn propagate(circuit: &Circuit, fault: &FaultEvent) -> Effect {
    let mut e = Effect::default();
    let inject = |e: &mut Effect| {
        for &(q, p) in &fault.paulis {
            e.x ^= (p.x_bit() as u64) << q;
            e.z ^= (p.z_bit() as u64) << q;
        }
    };
    let ops = circuit.ops();
    // measurement faults act before the readout, all others after the op
    let start = match ops[fault.location] {
        Operation::Measure { .. } => fault.location,
        _ => fault.location + 1,
    };
    inject(&mut e);
    for op in &ops[start..] {
        match op {
            Operation::PrepZ(q) | Operation::Reset(q) => {
                e.x &= !(1 << q);
                e.z &= !(1 << q);
            }
            Operation::Measure { basis, qubit, bit } => {
                let (x, z) = ((e.x >> qubit) & 1 == 1, (e.z >> qubit) & 1 == 1);
                let anti = match basis {
                    Basis::Z => x,
                    Basis::X => z,
                    Basis::Y => x ^ z,
                };
                if anti {
                    e.flips ^= 1 << bit;
                }
            }
            Operation::Unitary(g) | Operation::Cond { op: g, .. } => {
                clifford_steps(g, |step| match step {
                    CliffordStep::H(q) => {
                        let m = 1u64 << q;
                        let (x, z) = (e.x & m, e.z & m);
                        e.x = (e.x & !m) | z;
                        e.z = (e.z & !m) | x;
                    }
                    CliffordStep::S(q) | CliffordStep::Sdg(q) => e.z ^= e.x & (1 << q),
                    CliffordStep::X(_) | CliffordStep::Y(_) | CliffordStep::Z(_) => {}
                    CliffordStep::CX(c, t) => {
                        e.x ^= ((e.x >> c) & 1) << t;
                        e.z ^= ((e.z >> t) & 1) << c;
                    }
                })
                .expect("circuit checked to be Clifford");
            }
        }
    }
    e
}

/// Decision rule for unflagged effects on a Clifford gadget.
struct Judge {
    flag_mask: u128,
    registers: Vec<[usize; 7]>,
    /// Logical operators read out by the fidelity estimate, as
    /// per-register Paulis.
    terms: Vec<Vec<Pauli>>,
}

impl Judge {
    fn new(g: &Gadget) -> Result<Judge, VerifyError> {
        if g.injection.is_some() {
            return Err(VerifyError::Injection);
        }
        if g.target.stabilizer_labels().is_none() {
            return Err(VerifyError::NonStabilizerTarget(g.target.name()));
        }
        let n = g.target.n_logical();
        Ok(Judge {
            flag_mask: g.flag_bits.iter().map(|&b| 1u128 << b).sum(),
            registers: g.registers.clone(),
            terms: g
                .target
                .formula()
                .1
                .iter()
                .map(|(l, _)| parse_label(l, n).expect("valid label"))
                .collect(),
        })
    }

    fn register_bits(&self, mask: u64, reg: &[usize; 7]) -> u8 {
        reg.iter()
            .enumerate()
            .map(|(k, &q)| (((mask >> q) & 1) as u8) << k)
            .sum()
    }

    fn flagged(&self, e: &Effect) -> bool {
        e.flips & self.flag_mask != 0
    }

    /// True when ideal lookup correction of every register, applied
    /// separately to the X and Z sectors, leaves a logical Pauli that
    /// stabilizes the target (commutes with every term of its expansion).
    fn harmless(&self, e: &Effect) -> bool {
        let logical: Vec<(bool, bool)> = self
            .registers
            .iter()
            .map(|r| decode_residual(self.register_bits(e.x, r), self.register_bits(e.z, r)))
            .collect();
        self.terms.iter().all(|term| {
            let anti = term
                .iter()
                .zip(&logical)
                .filter(|(p, &(lx, lz))| (p.x_bit() && lz) ^ (p.z_bit() && lx))
                .count();
            anti % 2 == 0
        })
    }

    fn verdict(&self, fault: &FaultEvent, e: &Effect) -> FaultVerdict {
        let mut residual = String::new();
        let mut worst = 0;
        for r in &self.registers {
            let (w, x, z) = weight_mod_stabilizers(self.register_bits(e.x, r), self.register_bits(e.z, r));
            worst = worst.max(w);
            residual.extend((0..7).map(|k| Pauli::from_bits(x >> k & 1 == 1, z >> k & 1 == 1).symbol()));
        }
        let outcome = if self.flagged(e) {
            Outcome::Flagged
        } else if self.harmless(e) {
            Outcome::Correctable
        } else {
            Outcome::Uncorrectable
        };
        FaultVerdict {
            fault: fault.clone(),
            outcome,
            residual: Some(residual),
            residual_weight: Some(worst),
            fidelity: None,
        }
    }
}

/// Exhaustive single-fault certificate for an all-Clifford gadget.
pub fn verify_clifford(g: &Gadget) -> Result<Report, VerifyError> {
    check_clifford(&g.circuit)?;
    let judge = Judge::new(g)?;
    let faults = enumerate_faults(&g.circuit, &NoiseParams::default());
    let verdicts = crate::par::map(&faults, |f| judge.verdict(&f.event, &propagate(&g.circuit, &f.event)));
    Ok(Report::new(&g.name, "clifford", verdicts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCount {
    pub gadget: String,
    pub faults: usize,
    /// Pairs of faults at distinct locations.
    pub pairs: u64,
    pub sampled: bool,
    /// Number of unflagged pairs leaving a harmful residual (estimated when
    /// sampled).
    pub malignant: f64,
    /// Sum of the probability products of the malignant pairs, the leading
    /// term of the logical error rate.
    pub weighted: f64,
}

/// Counts fault pairs that escape the flags and corrupt the output.
/// Enumerates every pair when there are at most `budget` of them, otherwise
/// samples `budget` pairs uniformly.
pub fn count_malignant_pairs(
    g: &Gadget,
    params: &NoiseParams,
    budget: u64,
    seed: u64,
) -> Result<PairCount, VerifyError> {
    check_clifford(&g.circuit)?;
    let judge = Judge::new(g)?;
    let faults = enumerate_faults(&g.circuit, params);
    let effects: Vec<Effect> = crate::par::map(&faults, |f| propagate(&g.circuit, &f.event));
    let n = faults.len();
    let faults = &faults;
    let index_pairs = move |i: usize| (i + 1..n).filter(move |&j| faults[j].event.location != faults[i].event.location);
    let pairs: u64 = (0..n).map(|i| index_pairs(i).count() as u64).sum();
    let bad = |i: usize, j: usize| {
        let e = effects[i] ^ effects[j];
        !judge.flagged(&e) && !judge.harmless(&e)
    };
    if pairs <= budget {
        let rows: Vec<usize> = (0..n).collect();
        let per_row = crate::par::map(&rows, |&i| {
            index_pairs(i).filter(|&j| bad(i, j)).fold((0u64, 0.0), |(c, w), j| {
                (c + 1, w + faults[i].probability * faults[j].probability)
            })
        });
        let (count, weighted) = per_row.iter().fold((0u64, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        return Ok(PairCount {
            gadget: g.name.clone(),
            faults: n,
            pairs,
            sampled: false,
            malignant: count as f64,
            weighted,
        });
    }
    // uniform sampling over unordered index pairs, rejecting same-location pairs
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut hits, mut weight, mut drawn) = (0u64, 0.0, 0u64);
    while drawn < budget {
        let v = sample(&mut rng, n, 2);
        let (i, j) = (v.index(0), v.index(1));
        if faults[i].event.location == faults[j].event.location {
            continue;
        }
        drawn += 1;
        if bad(i, j) {
            hits += 1;
            weight += faults[i].probability * faults[j].probability;
        }
    }
    let scale = pairs as f64 / budget as f64;
    Ok(PairCount {
        gadget: g.name.clone(),
        faults: n,
        pairs,
        sampled: true,
        malignant: hits as f64 * scale,
        weighted: weight * scale,
    })
}

/// Default cap on explored measurement branches per fault.
pub const DEFAULT_BRANCH_CAP: usize = 1 << 12;

/// Minimum decoded fidelity for a state to count as the target.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-8;

/// Encoded single-register target state on 7 qubits.
pub fn encoded_state(target: Target) -> Option<Vec<C>> {
    let [a, b] = target.amplitudes()?;
    let mut v = vec![C::new(0.0, 0.0); 128];
    let amp = 1.0 / 8f64.sqrt();
    for w in STEANE.codewords() {
        v[w as usize] += a * amp;
        v[(w ^ 0x7f) as usize] += b * amp;
    }
    Some(v)
}

/// Probability that ideal lookup correction of `psi` (7 qubits) returns the
/// encoded `target`.
pub fn corrected_fidelity(psi: &[C], target: &[C]) -> f64 {
    let flips: Vec<Option<usize>> = std::iter::once(None).chain((0..7).map(Some)).collect();
    let mut total = 0.0;
    for &qx in &flips {
        for &qz in &flips {
            // <t| X_qx Z_qz |psi>
            let mut acc = C::new(0.0, 0.0);
            for (i, a) in psi.iter().enumerate() {
                let sign = match qz {
                    Some(q) if i >> q & 1 == 1 => -1.0,
                    _ => 1.0,
                };
                let j = qx.map_or(i, |q| i ^ (1 << q));
                acc += target[j].conj() * a * sign;
            }
            total += acc.norm_sqr();
        }
    }
    total
}

/// Decoded expectation of a transversal logical Pauli on a 7-qubit state:
/// the state is read out qubit-wise in the Pauli's basis and every outcome
/// string is corrected by the lookup decoder.
pub fn decoded_expectation(psi: &[C], p: Pauli) -> f64 {
    let mut s = StateVector::from_amplitudes(psi.to_vec()).expect("7-qubit state");
    for q in 0..7 {
        if p == Pauli::Y {
            s.apply_gate(&GateOp::one(Gate::Sdg, q)).expect("in range");
        }
        if p != Pauli::Z {
            s.apply_gate(&GateOp::one(Gate::H, q)).expect("in range");
        }
    }
    let sign = if p == Pauli::Y { -1.0 } else { 1.0 };
    s.amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * if decoded_parity(b as u8) { -sign } else { sign })
        .sum()
}

/// Logical fidelity estimate of a single-register `target` obtained from
/// decoded transversal readouts of `psi`.
pub fn readout_fidelity(psi: &[C], target: Target) -> f64 {
    let (c0, terms) = target.formula();
    terms.iter().fold(c0, |f, (l, c)| {
        let p = parse_label(l, 1).expect("single-register label")[0];
        f + c * decoded_expectation(psi, p)
    })
}

struct Branch {
    state: StateVector,
    next: usize,
    bits: Vec<bool>,
}

/// Explores every measurement branch of `circuit` with `fault` injected.
/// Returns the smallest fidelity over accepted branches (`None` when all
/// branches are rejected), or `Err(())` when the branch cap is exceeded.
fn explore(
    circuit: &Circuit,
    fault: Option<&FaultEvent>,
    flags: &[usize],
    keep: &[usize],
    encoded: &[C],
    cap: usize,
) -> Result<Result<Option<f64>, ()>, VerifyError> {
    let mut stack = vec![Branch {
        state: StateVector::new(circuit.n_qubits())?,
        next: 0,
        bits: vec![false; circuit.n_classical()],
    }];
    let mut leaves = 0usize;
    let mut worst: Option<f64> = None;
    let apply_fault = |s: &mut StateVector| {
        if let Some(f) = fault {
            for &(q, p) in &f.paulis {
                crate::backend::Backend::apply_pauli_at(s, q, p);
            }
        }
    };
    'branches: while let Some(mut br) = stack.pop() {
        while br.next < circuit.len() {
            let loc = br.next;
            br.next += 1;
            let here = fault.is_some_and(|f| f.location == loc);
            match circuit.ops()[loc] {
                Operation::Unitary(g) => {
                    br.state.apply_gate(&g)?;
                    if here {
                        apply_fault(&mut br.state);
                    }
                }
                Operation::Cond { .. } => return Err(VerifyError::Conditional),
                Operation::PrepZ(q) | Operation::Reset(q) => {
                    let p = br.state.prob_minus(q, Basis::Z);
                    if p > CERTAIN_TOL && p < 1.0 - CERTAIN_TOL {
                        let mut other = Branch {
                            state: br.state.clone(),
                            next: br.next,
                            bits: br.bits.clone(),
                        };
                        other.state.project(q, Basis::Z, true)?;
                        crate::backend::Backend::apply_pauli_at(&mut other.state, q, Pauli::X);
                        if here {
                            apply_fault(&mut other.state);
                        }
                        stack.push(other);
                        br.state.project(q, Basis::Z, false)?;
                    } else if p >= 1.0 - CERTAIN_TOL {
                        br.state.project(q, Basis::Z, true)?;
                        crate::backend::Backend::apply_pauli_at(&mut br.state, q, Pauli::X);
                    }
                    if here {
                        apply_fault(&mut br.state);
                    }
                }
                Operation::Measure { basis, qubit, bit } => {
                    if here {
                        apply_fault(&mut br.state);
                    }
                    let p = br.state.prob_minus(qubit, basis);
                    let minus = if p <= CERTAIN_TOL {
                        false
                    } else if p >= 1.0 - CERTAIN_TOL {
                        true
                    } else {
                        let mut other = Branch {
                            state: br.state.clone(),
                            next: br.next,
                            bits: br.bits.clone(),
                        };
                        other.state.project(qubit, basis, true)?;
                        other.bits[bit] = true;
                        if !flags.contains(&bit) {
                            stack.push(other);
                        }
                        false
                    };
                    br.state.project(qubit, basis, minus)?;
                    br.bits[bit] = minus;
                    if minus && flags.contains(&bit) {
                        continue 'branches;
                    }
                }
            }
        }
        leaves += 1;
        if leaves > cap {
            return Ok(Err(()));
        }
        let psi = br
            .state
            .extract_register(keep)
            .expect("data register is unentangled from measured ancillas");
        let f = corrected_fidelity(&psi, encoded);
        worst = Some(worst.map_or(f, |w: f64| w.min(f)));
    }
    Ok(Ok(worst))
}

/// Single-fault certificate by state-vector simulation, for gadgets with
/// one output register and any gate set.
pub fn verify_statevector(g: &Gadget, branch_cap: usize) -> Result<Report, VerifyError> {
    verify_statevector_window(g, 0..g.circuit.len(), branch_cap)
}

/// As [`verify_statevector`], with faults restricted to the locations in
/// `window` (for certifying one stage of a longer protocol).
pub fn verify_statevector_window(
    g: &Gadget,
    window: std::ops::Range<usize>,
    branch_cap: usize,
) -> Result<Report, VerifyError> {
    if g.injection.is_some() {
        return Err(VerifyError::Injection);
    }
    if g.registers.len() != 1 {
        return Err(VerifyError::MultiRegister);
    }
    if g.target.n_logical() != 1 {
        return Err(VerifyError::MultiRegister);
    }
    let encoded = encoded_state(g.target).ok_or(VerifyError::MultiRegister)?;
    let (compact, slots) = compact_qubits(&g.circuit);
    let keep: Vec<usize> = g.registers[0].iter().map(|&q| slots[q]).collect();
    // faults are addressed in compacted qubit labels, position by position
    let faults: Vec<FaultEvent> = enumerate_faults(&g.circuit, &NoiseParams::default())
        .into_iter()
        .filter(|f| window.contains(&f.event.location))
        .map(|f| {
            let orig = g.circuit.ops()[f.event.location].targets();
            let new = compact.ops()[f.event.location].targets();
            let paulis = f
                .event
                .paulis
                .iter()
                .map(|&(q, p)| (new[orig.iter().position(|&o| o == q).expect("fault on target")], p))
                .collect();
            FaultEvent { location: f.event.location, paulis }
        })
        .collect();
    let verdicts: Vec<Result<FaultVerdict, VerifyError>> = crate::par::map(&faults, |f| {
        let r = explore(&compact, Some(f), &g.flag_bits, &keep, &encoded, branch_cap)?;
        // report the fault in original qubit labels
        let orig = g.circuit.ops()[f.location].targets();
        let new = compact.ops()[f.location].targets();
        let fault = FaultEvent {
            location: f.location,
            paulis: f
                .paulis
                .iter()
                .map(|&(q, p)| (orig[new.iter().position(|&o| o == q).expect("fault on target")], p))
                .collect(),
        };
        let (outcome, fidelity) = match r {
            Err(()) => (Outcome::Inconclusive, None),
            Ok(None) => (Outcome::Flagged, None),
            Ok(Some(fid)) if fid >= FIDELITY_THRESHOLD => (Outcome::Correctable, Some(fid)),
            Ok(Some(fid)) => (Outcome::Uncorrectable, Some(fid)),
        };
        Ok(FaultVerdict {
            fault,
            outcome,
            residual: None,
            residual_weight: None,
            fidelity,
        })
    });
    let verdicts = verdicts.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new(&g.name, "statevector", verdicts))
}

/// Post-correction fidelity of the fault-free run (smallest over branches).
pub fn ideal_fidelity(g: &Gadget) -> Result<Option<f64>, VerifyError> {
    if g.registers.len() != 1 {
        return Err(VerifyError::MultiRegister);
    }
    let encoded = encoded_state(g.target).ok_or(VerifyError::MultiRegister)?;
    let (compact, slots) = compact_qubits(&g.circuit);
    let keep: Vec<usize> = g.registers[0].iter().map(|&q| slots[q]).collect();
    Ok(explore(&compact, None, &g.flag_bits, &keep, &encoded, DEFAULT_BRANCH_CAP)?.ok().flatten())
}

/// Chooses the Pauli-frame mode for Clifford gadgets with stabilizer
/// targets and the state-vector mode otherwise.
pub fn verify(g: &Gadget) -> Result<Report, VerifyError> {
    if g.circuit.is_clifford() && g.target.stabilizer_labels().is_some() {
        verify_clifford(g)
    } else {
        verify_statevector(g, DEFAULT_BRANCH_CAP)
    }
}

/// Formats a Pauli frame restricted to `qubits` as a Pauli string.
pub fn frame_string(e: &Effect, qubits: &[usize]) -> PauliString {
    let letters: Vec<Pauli> = qubits
        .iter()
        .map(|&q| Pauli::from_bits((e.x >> q) & 1 == 1, (e.z >> q) & 1 == 1))
        .collect();
    PauliString::from_letters(&letters)
}
