//! Dense state-vector engine for up to 16 qubits.
//!
//! Qubit `k` is bit `k` of the amplitude index (little-endian). Gates are
//! applied in place by iterating over amplitude pairs or quadruples; no
//! operator larger than 4x4 is ever materialized.

use crate::backend::{draw_outcome, Backend, SimError};
use crate::circuit::unitary::{matrix_1q, M2};
use crate::circuit::{Basis, Gate, GateOp, Pauli, PauliString};
use num_complex::Complex64 as C;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

pub const MAX_QUBITS: usize = 16;

/// Branches below this probability cannot be selected or projected onto.
pub const MIN_BRANCH_PROB: f64 = 1e-14;

const ZERO: C = C::new(0.0, 0.0);
const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C>,
}

impl StateVector {
    /// The state |0...0>.
    pub fn new(n: usize) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                requested: n,
                limit: MAX_QUBITS,
            });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = C::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wraps an amplitude vector whose length is a power of two. The vector
    /// is normalized on the way in.
    pub fn from_amplitudes(amps: Vec<C>) -> Result<Self, SimError> {
        let n = amps.len().trailing_zeros() as usize;
        assert_eq!(1usize << n, amps.len(), "amplitude count must be a power of two");
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                requested: n,
                limit: MAX_QUBITS,
            });
        }
        let mut s = StateVector { n, amps };
        let norm = s.norm();
        s.scale(1.0 / norm);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, f: f64) {
        for a in &mut self.amps {
            *a *= f;
        }
    }

    fn check(&self, q: usize) -> Result<(), SimError> {
        if q < self.n {
            Ok(())
        } else {
            Err(SimError::QubitOutOfRange { qubit: q, n: self.n })
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn apply_matrix(&mut self, q: usize, m: &M2) {
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                let (a0, a1) = (self.amps[i], self.amps[i + stride]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_diagonal(&mut self, q: usize, d0: C, d1: C) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { d0 } else { d1 };
        }
    }

    fn apply_x(&mut self, q: usize) {
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                self.amps.swap(i, i + stride);
            }
        }
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<(), SimError> {
        for &q in op.targets() {
            self.check(q)?;
        }
        let (a, b) = (op.qubits[0], op.qubits[1]);
        let (ba, bb) = (1usize << a, 1usize << b);
        match op.gate {
            Gate::X => self.apply_x(a),
            Gate::Z => self.apply_diagonal(a, C::new(1.0, 0.0), C::new(-1.0, 0.0)),
            Gate::S => self.apply_diagonal(a, C::new(1.0, 0.0), I),
            Gate::Sdg => self.apply_diagonal(a, C::new(1.0, 0.0), -I),
            Gate::RZ(t) => self.apply_diagonal(a, C::from_polar(1.0, -t / 2.0), C::from_polar(1.0, t / 2.0)),
            Gate::H | Gate::Y | Gate::RX(_) | Gate::RY(_) => self.apply_matrix(a, &matrix_1q(op.gate)),
            Gate::CX => {
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        self.amps.swap(i, i | bb);
                    }
                }
            }
            Gate::CY => {
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        let (a0, a1) = (self.amps[i], self.amps[i | bb]);
                        self.amps[i] = -I * a1;
                        self.amps[i | bb] = I * a0;
                    }
                }
            }
            Gate::MS(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let mis = C::new(0.0, -s);
                let flip = ba | bb;
                for i in 0..self.amps.len() {
                    if i & ba == 0 {
                        let j = i ^ flip;
                        let (x, y) = (self.amps[i], self.amps[j]);
                        self.amps[i] = c * x + mis * y;
                        self.amps[j] = c * y + mis * x;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<(), SimError> {
        if p.len() != self.n {
            return Err(SimError::LengthMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        for (q, l) in p.support() {
            self.apply_pauli_at(q, l);
        }
        let phase = [C::new(1.0, 0.0), I, C::new(-1.0, 0.0), -I][p.phase() as usize];
        if phase != C::new(1.0, 0.0) {
            for a in &mut self.amps {
                *a *= phase;
            }
        }
        Ok(())
    }

    /// Eigenvector of `basis` with eigenvalue -1 (`minus`) or +1.
    fn eigvec(basis: Basis, minus: bool) -> (C, C) {
        let h = FRAC_1_SQRT_2;
        match (basis, minus) {
            (Basis::Z, false) => (C::new(1.0, 0.0), ZERO),
            (Basis::Z, true) => (ZERO, C::new(1.0, 0.0)),
            (Basis::X, false) => (C::new(h, 0.0), C::new(h, 0.0)),
            (Basis::X, true) => (C::new(h, 0.0), C::new(-h, 0.0)),
            (Basis::Y, false) => (C::new(h, 0.0), C::new(0.0, h)),
            (Basis::Y, true) => (C::new(h, 0.0), C::new(0.0, -h)),
        }
    }

    /// Probability of the -1 outcome when measuring `q` in `basis`.
    pub fn prob_minus(&self, q: usize, basis: Basis) -> f64 {
        let (v0, v1) = Self::eigvec(basis, true);
        let stride = 1usize << q;
        let mut p = 0.0;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                p += (v0.conj() * self.amps[i] + v1.conj() * self.amps[i + stride]).norm_sqr();
            }
        }
        p.clamp(0.0, 1.0)
    }

    /// Projects onto the chosen outcome and renormalizes; returns the branch
    /// probability.
    pub fn project(&mut self, q: usize, basis: Basis, minus: bool) -> Result<f64, SimError> {
        self.check(q)?;
        let p = if minus {
            self.prob_minus(q, basis)
        } else {
            1.0 - self.prob_minus(q, basis)
        };
        if p < MIN_BRANCH_PROB {
            return Err(SimError::NormUnderflow(p));
        }
        let (v0, v1) = Self::eigvec(basis, minus);
        let f = 1.0 / p.sqrt();
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                let c = (v0.conj() * self.amps[i] + v1.conj() * self.amps[i + stride]) * f;
                self.amps[i] = c * v0;
                self.amps[i + stride] = c * v1;
            }
        }
        Ok(p)
    }

    /// Measures `q` in `basis`, returning +1 or -1.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, basis: Basis, rng: &mut R) -> Result<i8, SimError> {
        self.check(q)?;
        let minus = draw_outcome(self.prob_minus(q, basis), rng);
        self.project(q, basis, minus)?;
        Ok(if minus { -1 } else { 1 })
    }

    /// `<psi|P|psi>` for a Pauli observable.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        let mut t = self.clone();
        t.apply_pauli(p).expect("length checked by caller");
        self.inner(&t).re
    }

    /// Normalized state of the qubits in `keep` (bit `j` of the result is
    /// `keep[j]`), provided the full state is a product across the split
    /// between `keep` and the remaining qubits. Returns `None` for entangled
    /// states.
    pub fn extract_register(&self, keep: &[usize]) -> Option<Vec<C>> {
        let keep_mask: usize = keep.iter().map(|&q| 1usize << q).sum();
        let (imax, &pivot) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
        let scatter = |k: usize| {
            keep.iter()
                .enumerate()
                .filter(|(j, _)| k >> j & 1 == 1)
                .map(|(_, &q)| 1usize << q)
                .sum::<usize>()
        };
        let rest = imax & !keep_mask;
        let mut out: Vec<C> = (0..1usize << keep.len()).map(|k| self.amps[rest | scatter(k)]).collect();
        // rank-1 test: amp[r, k] * pivot == amp[r, k*] * amp[r*, k]
        let kpart = imax & keep_mask;
        let mut defect = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            let (r, k) = (i & !keep_mask, i & keep_mask);
            defect += (a * pivot - self.amps[r | kpart] * self.amps[rest | k]).norm_sqr();
        }
        if defect > 1e-18 + 1e-9 * pivot.norm_sqr() * pivot.norm_sqr() {
            return None;
        }
        let norm = out.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut out {
            *a /= norm;
        }
        Some(out)
    }
}

/// Full unitary of a gate list on `n` qubits, row-major, for small `n`.
pub fn unitary_of(ops: &[GateOp], n: usize) -> Vec<Vec<C>> {
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut amps = vec![ZERO; dim];
        amps[k] = C::new(1.0, 0.0);
        let mut s = StateVector { n, amps };
        for op in ops {
            s.apply_gate(op).expect("gate within register");
        }
        cols.push(s.amps);
    }
    (0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect()
}

impl Backend for StateVector {
    fn zeroed(n: usize) -> Result<Self, SimError> {
        StateVector::new(n)
    }

    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply_gate(&mut self, op: &GateOp) -> Result<(), SimError> {
        StateVector::apply_gate(self, op)
    }

    fn apply_pauli_at(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.apply_x(q),
            Pauli::Z => self.apply_diagonal(q, C::new(1.0, 0.0), C::new(-1.0, 0.0)),
            Pauli::Y => {
                let stride = 1usize << q;
                for base in (0..self.amps.len()).step_by(stride << 1) {
                    for i in base..base + stride {
                        let (a0, a1) = (self.amps[i], self.amps[i + stride]);
                        self.amps[i] = -I * a1;
                        self.amps[i + stride] = I * a0;
                    }
                }
            }
        }
    }

    fn measure_bit<R: Rng + ?Sized>(&mut self, q: usize, basis: Basis, rng: &mut R) -> Result<bool, SimError> {
        Ok(self.measure(q, basis, rng)? == -1)
    }
}
