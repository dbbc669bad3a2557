//! Common interface of the two simulation engines.

use crate::circuit::{Basis, Gate, GateOp, Pauli};
use rand::Rng;
use thiserror::Error;

/// Branch probabilities closer than this to 0 or 1 are treated as certain
/// and consume no randomness.
pub const CERTAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimError {
    #[error("gate {0} is not supported by this backend (use the statevector engine)")]
    UnsupportedGate(String),
    #[error("{requested} qubits exceed the backend limit of {limit}")]
    TooManyQubits { requested: usize, limit: usize },
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("measurement branch with probability {0:e} selected; state norm underflow")]
    NormUnderflow(f64),
    #[error("Pauli string of length {found} applied to a {expected}-qubit register")]
    LengthMismatch { expected: usize, found: usize },
}

pub(crate) fn unsupported(gate: Gate) -> SimError {
    SimError::UnsupportedGate(format!("{gate:?}"))
}

/// Samples a measurement bit (`true` = outcome -1) given the probability of
/// the -1 outcome.
///
/// Shared by both engines so that identical circuits consume identical
/// random streams: near-certain outcomes draw nothing, every other outcome
/// draws exactly one `f64`.
pub fn draw_outcome<R: Rng + ?Sized>(p_minus: f64, rng: &mut R) -> bool {
    if p_minus <= CERTAIN_TOL {
        false
    } else if p_minus >= 1.0 - CERTAIN_TOL {
        true
    } else {
        rng.gen::<f64>() < p_minus
    }
}

pub trait Backend: Clone + Send {
    /// Fresh all-zero register of `n` qubits.
    fn zeroed(n: usize) -> Result<Self, SimError>;

    fn num_qubits(&self) -> usize;

    fn apply_gate(&mut self, op: &GateOp) -> Result<(), SimError>;

    fn apply_pauli_at(&mut self, q: usize, p: Pauli);

    /// Measures `q` in `basis`; returns `true` for outcome -1.
    fn measure_bit<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<bool, SimError>;

    /// Z measurement followed by a flip to |0> on outcome -1.
    fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<(), SimError> {
        if self.measure_bit(q, Basis::Z, rng)? {
            self.apply_pauli_at(q, Pauli::X);
        }
        Ok(())
    }
}
