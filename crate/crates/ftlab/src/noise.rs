//! Depolarizing circuit noise and fault injection.
//!
//! Fault placement per operation:
//! * one-qubit physical gates: `E_1` with rate `p1` after the gate;
//!   virtual Z rotations (`RZ`, `S`, `SDG`, `Z`) are noiseless;
//! * two-qubit gates: `E_2` with rate `p2` after the gate;
//! * `PREPZ`/`RESET`: `E_1` with rate `pi` after the preparation;
//! * measurements: `E_1` with rate `pm` applied just before the projector,
//!   so that X and Y components flip a Z outcome;
//! * classically conditioned gates carry the noise of their inner gate, and
//!   only when they fire.
//!
//! Every noisy location consumes exactly one uniform draw; the same draw
//! selects which Pauli occurs. Random measurement outcomes consume one more
//! draw each (see [`crate::backend::draw_outcome`]).

use crate::backend::{Backend, SimError};
use crate::circuit::{Circuit, Operation, Pauli};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p1: f64,
    pub p2: f64,
    pub pi: f64,
    pub pm: f64,
}

impl Default for NoiseParams {
    /// Rates estimated for the trapped-ion processor being modeled.
    fn default() -> Self {
        NoiseParams {
            p1: 0.005,
            p2: 0.025,
            pi: 0.003,
            pm: 0.003,
        }
    }
}

impl NoiseParams {
    pub fn zero() -> Self {
        NoiseParams {
            p1: 0.0,
            p2: 0.0,
            pi: 0.0,
            pm: 0.0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        NoiseParams {
            p1: self.p1 * factor,
            p2: self.p2 * factor,
            pi: self.pi * factor,
            pm: self.pm * factor,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("pi", self.pi), ("pm", self.pm)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(NoiseError::InvalidRate { name, value: p });
            }
        }
        Ok(())
    }

    /// Rate attached to a location of the given kind.
    pub fn rate(&self, kind: LocationKind) -> f64 {
        match kind {
            LocationKind::Noiseless => 0.0,
            LocationKind::OneQubit => self.p1,
            LocationKind::TwoQubit => self.p2,
            LocationKind::Prep => self.pi,
            LocationKind::Measure => self.pm,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NoiseError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("rate {name} = {value} is outside [0, 1]")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("fault location {location} is out of range for a circuit of {len} operations")]
    LocationOutOfRange { location: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocationKind {
    Noiseless,
    OneQubit,
    TwoQubit,
    Prep,
    Measure,
}

pub fn location_kind(op: &Operation) -> LocationKind {
    match op {
        Operation::PrepZ(_) | Operation::Reset(_) => LocationKind::Prep,
        Operation::Measure { .. } => LocationKind::Measure,
        Operation::Unitary(g) | Operation::Cond { op: g, .. } => {
            if g.gate.arity() == 2 {
                LocationKind::TwoQubit
            } else if g.gate.is_virtual() {
                LocationKind::Noiseless
            } else {
                LocationKind::OneQubit
            }
        }
    }
}

/// A Pauli fault attached to one operation. For measurements it acts before
/// the projector, for every other operation after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultEvent {
    pub location: usize,
    pub paulis: Vec<(usize, Pauli)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ShotRecord {
    /// Classical bits, `true` meaning outcome -1.
    pub bits: Vec<bool>,
    pub faults: Vec<FaultEvent>,
    /// Set when execution stopped early because a stop bit read -1.
    pub aborted: bool,
}

impl ShotRecord {
    pub fn outcome(&self, bit: usize) -> i8 {
        if self.bits[bit] {
            -1
        } else {
            1
        }
    }
}

fn pick_1q(u: f64, p: f64) -> Pauli {
    Pauli::NON_IDENTITY[((u / p * 3.0) as usize).min(2)]
}

fn pick_2q(u: f64, p: f64) -> (Pauli, Pauli) {
    let k = ((u / p * 15.0) as usize).min(14) + 1;
    (Pauli::ALL[k / 4], Pauli::ALL[k % 4])
}

/// Draws from `E_1`: nothing with probability `1-p`, else X, Y or Z each with `p/3`.
pub fn sample_1q_error<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Option<Pauli> {
    let u: f64 = rng.gen();
    (u < p).then(|| pick_1q(u, p))
}

/// Draws from `E_2`: nothing with probability `1-p`, else each of the 15
/// non-identity two-qubit Paulis with `p/15`.
pub fn sample_2q_error<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Option<(Pauli, Pauli)> {
    let u: f64 = rng.gen();
    (u < p).then(|| pick_2q(u, p))
}

/// Source of faults consulted at every executed location.
pub trait FaultSource {
    fn fault_at<R: Rng + ?Sized>(
        &mut self,
        location: usize,
        op: &Operation,
        rng: &mut R,
    ) -> Option<FaultEvent>;
}

/// Independent depolarizing faults at the configured rates.
pub struct Sampled<'a>(pub &'a NoiseParams);

impl FaultSource for Sampled<'_> {
    fn fault_at<R: Rng + ?Sized>(
        &mut self,
        location: usize,
        op: &Operation,
        rng: &mut R,
    ) -> Option<FaultEvent> {
        let p = self.0.rate(location_kind(op));
        if p <= 0.0 {
            return None;
        }
        let u: f64 = rng.gen();
        if u >= p {
            return None;
        }
        let t = op.targets();
        let paulis = if t.len() == 2 {
            let (a, b) = pick_2q(u, p);
            [(t[0], a), (t[1], b)]
                .into_iter()
                .filter(|(_, l)| *l != Pauli::I)
                .collect()
        } else {
            vec![(t[0], pick_1q(u, p))]
        };
        Some(FaultEvent { location, paulis })
    }
}

/// A fixed list of faults, no sampling.
pub struct Fixed<'a>(pub &'a [FaultEvent]);

impl FaultSource for Fixed<'_> {
    fn fault_at<R: Rng + ?Sized>(&mut self, location: usize, _: &Operation, _: &mut R) -> Option<FaultEvent> {
        let hits: Vec<_> = self.0.iter().filter(|f| f.location == location).collect();
        match hits.len() {
            0 => None,
            1 => Some(hits[0].clone()),
            _ => Some(FaultEvent {
                location,
                paulis: hits.iter().flat_map(|f| f.paulis.iter().copied()).collect(),
            }),
        }
    }
}

/// Options for [`execute`].
#[derive(Debug, Clone, Default)]
pub struct ExecOptions {
    /// Bits whose -1 outcome ends the shot immediately (post-selection).
    pub stop_bits: Vec<bool>,
    /// Keep the list of faults in the record.
    pub record_faults: bool,
}

impl ExecOptions {
    pub fn stop_on(bits: &[usize], n_classical: usize) -> Self {
        let mut stop_bits = vec![false; n_classical];
        for &b in bits {
            stop_bits[b] = true;
        }
        ExecOptions {
            stop_bits,
            record_faults: false,
        }
    }
}

/// Runs `ops[start..]` of `circuit` on `backend`, writing into `record`.
///
/// Lower-level entry point used by the harness to continue a shot after
/// inspecting intermediate results.
pub fn execute_from<B: Backend, F: FaultSource, R: Rng + ?Sized>(
    circuit: &Circuit,
    start: usize,
    backend: &mut B,
    faults: &mut F,
    options: &ExecOptions,
    record: &mut ShotRecord,
    rng: &mut R,
) -> Result<(), SimError> {
    if record.bits.len() < circuit.n_classical() {
        record.bits.resize(circuit.n_classical(), false);
    }
    for (loc, op) in circuit.ops().iter().enumerate().skip(start) {
        let fault = match op {
            Operation::Cond { bit, .. } if !record.bits[*bit] => continue,
            _ => faults.fault_at(loc, op, rng),
        };
        let apply = |b: &mut B, f: &Option<FaultEvent>| {
            if let Some(f) = f {
                for &(q, l) in &f.paulis {
                    b.apply_pauli_at(q, l);
                }
            }
        };
        match op {
            Operation::PrepZ(q) | Operation::Reset(q) => {
                backend.reset(*q, rng)?;
                apply(backend, &fault);
            }
            Operation::Measure { basis, qubit, bit } => {
                apply(backend, &fault);
                let m = backend.measure_bit(*qubit, *basis, rng)?;
                record.bits[*bit] = m;
                if m && options.stop_bits.get(*bit).copied().unwrap_or(false) {
                    record.aborted = true;
                }
            }
            Operation::Unitary(g) | Operation::Cond { op: g, .. } => {
                backend.apply_gate(g)?;
                apply(backend, &fault);
            }
        }
        if options.record_faults {
            if let Some(f) = fault {
                record.faults.push(f);
            }
        }
        if record.aborted {
            break;
        }
    }
    Ok(())
}

/// Executes a circuit with faults sampled from `params`.
pub fn noisy_execute<B: Backend, R: Rng + ?Sized>(
    circuit: &Circuit,
    params: &NoiseParams,
    backend: &mut B,
    rng: &mut R,
) -> Result<ShotRecord, NoiseError> {
    params.validate()?;
    let mut record = ShotRecord::default();
    let options = ExecOptions {
        record_faults: true,
        ..Default::default()
    };
    execute_from(circuit, 0, backend, &mut Sampled(params), &options, &mut record, rng)?;
    Ok(record)
}

/// Executes a circuit ideally except for exactly the listed faults.
/// Random measurement outcomes still come from `rng`.
pub fn inject_fixed<B: Backend, R: Rng + ?Sized>(
    circuit: &Circuit,
    faults: &[FaultEvent],
    backend: &mut B,
    rng: &mut R,
) -> Result<ShotRecord, NoiseError> {
    if let Some(f) = faults.iter().find(|f| f.location >= circuit.len()) {
        return Err(NoiseError::LocationOutOfRange {
            location: f.location,
            len: circuit.len(),
        });
    }
    let mut record = ShotRecord::default();
    let options = ExecOptions {
        record_faults: true,
        ..Default::default()
    };
    execute_from(circuit, 0, backend, &mut Fixed(faults), &options, &mut record, rng)?;
    Ok(record)
}

/// Independent random stream for one shot: ChaCha8 keyed by the master seed,
/// stream id = global shot index.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}
