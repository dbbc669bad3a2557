//! Stabilizer tableau engine for Clifford circuits of up to 32 qubits.
//!
//! Storage is column-major and bit-sliced: for each qubit one word holds its
//! X bits across all `2n` generator rows, another its Z bits, and a single
//! word holds the row signs. Rows `0..n` are destabilizers, rows `n..2n`
//! stabilizers. Every gate therefore touches a constant number of words.

use crate::backend::{draw_outcome, unsupported, Backend, SimError};
use crate::circuit::pauli::product_phase;
use crate::circuit::{clifford_steps, Basis, CliffordStep, GateOp, Pauli, PauliString};
use rand::Rng;

pub const MAX_QUBITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: u64,
}

impl Tableau {
    /// The state |0...0>.
    pub fn new(n: usize) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                requested: n,
                limit: MAX_QUBITS,
            });
        }
        let x = (0..n).map(|q| 1u64 << q).collect();
        let z = (0..n).map(|q| 1u64 << (n + q)).collect();
        Ok(Tableau { n, x, z, r: 0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, q: usize) -> Result<(), SimError> {
        if q < self.n {
            Ok(())
        } else {
            Err(SimError::QubitOutOfRange { qubit: q, n: self.n })
        }
    }

    fn stab_mask(&self) -> u64 {
        if self.n == 32 {
            u64::MAX << 32
        } else {
            ((1u64 << self.n) - 1) << self.n
        }
    }

    fn h(&mut self, q: usize) {
        self.r ^= self.x[q] & self.z[q];
        std::mem::swap(&mut self.x[q], &mut self.z[q]);
    }

    fn s(&mut self, q: usize) {
        self.r ^= self.x[q] & self.z[q];
        self.z[q] ^= self.x[q];
    }

    fn sdg(&mut self, q: usize) {
        self.r ^= self.x[q] & !self.z[q];
        self.z[q] ^= self.x[q];
    }

    fn px(&mut self, q: usize) {
        self.r ^= self.z[q];
    }

    fn py(&mut self, q: usize) {
        self.r ^= self.x[q] ^ self.z[q];
    }

    fn pz(&mut self, q: usize) {
        self.r ^= self.x[q];
    }

    fn cx(&mut self, c: usize, t: usize) {
        let (xc, zc, xt, zt) = (self.x[c], self.z[c], self.x[t], self.z[t]);
        self.r ^= xc & zt & !(xt ^ zc);
        self.x[t] = xt ^ xc;
        self.z[c] = zc ^ zt;
    }

    /// Applies a Clifford gate. Rotations must be multiples of pi/2.
    pub fn apply_clifford(&mut self, op: &GateOp) -> Result<(), SimError> {
        for &q in op.targets() {
            self.check(q)?;
        }
        clifford_steps(op, |step| match step {
            CliffordStep::H(q) => self.h(q),
            CliffordStep::S(q) => self.s(q),
            CliffordStep::Sdg(q) => self.sdg(q),
            CliffordStep::X(q) => self.px(q),
            CliffordStep::Y(q) => self.py(q),
            CliffordStep::Z(q) => self.pz(q),
            CliffordStep::CX(c, t) => self.cx(c, t),
        })
        .map_err(unsupported)
    }

    /// Applies a Pauli operator; only sign bits change.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<(), SimError> {
        if p.len() != self.n {
            return Err(SimError::LengthMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        for (q, letter) in p.support() {
            self.apply_pauli_at(q, letter);
        }
        Ok(())
    }

    /// Batch row multiplication `row_h <- row_p * row_h` for every row `h`
    /// in `mask`.
    fn rowsum_into(&mut self, p: usize, mask: u64) {
        let mut lo = 0u64;
        let mut hi = 0u64;
        let pbit = 1u64 << p;
        for j in 0..self.n {
            let (xj, zj) = (self.x[j], self.z[j]);
            let (xp, zp) = (xj & pbit != 0, zj & pbit != 0);
            let (plus, minus) = match (xp, zp) {
                (false, false) => continue,
                (true, true) => (zj & !xj, xj & !zj),
                (true, false) => (zj & xj, zj & !xj),
                (false, true) => (xj & !zj, xj & zj),
            };
            let (plus, minus) = (plus & mask, minus & mask);
            // bit-sliced mod-4 counter: add 1 on `plus`, add 3 on `minus`
            let carry = lo & plus;
            lo ^= plus;
            hi ^= carry;
            let carry = lo & minus;
            lo ^= minus;
            hi ^= !carry & minus;
            if xp {
                self.x[j] ^= mask;
            }
            if zp {
                self.z[j] ^= mask;
            }
        }
        let src_sign = if self.r & pbit != 0 { mask } else { 0 };
        self.r ^= (hi & mask) ^ src_sign;
    }

    fn row(&self, k: usize) -> (u64, u64) {
        let (mut xs, mut zs) = (0u64, 0u64);
        for j in 0..self.n {
            xs |= ((self.x[j] >> k) & 1) << j;
            zs |= ((self.z[j] >> k) & 1) << j;
        }
        (xs, zs)
    }

    /// Pauli operator of row `k` (`k >= n` selects stabilizers).
    pub fn row_pauli(&self, k: usize) -> PauliString {
        let (xs, zs) = self.row(k);
        let mut p = PauliString::identity(self.n);
        for q in 0..self.n {
            p.set(q, Pauli::from_bits((xs >> q) & 1 == 1, (zs >> q) & 1 == 1));
        }
        if self.r & (1 << k) != 0 {
            p.negate();
        }
        p
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|k| self.row_pauli(k)).collect()
    }

    /// Outcome of measuring Z on `q` without disturbing the state, if it is
    /// deterministic.
    pub fn peek_z(&self, q: usize) -> Option<i8> {
        if self.x[q] & self.stab_mask() != 0 {
            return None;
        }
        let destab = self.x[q] & !self.stab_mask();
        Some(if self.product_sign(destab << self.n) { -1 } else { 1 })
    }

    /// Sign of the product of the stabilizer rows selected by `rows`
    /// (true = negative), assuming the product is Hermitian.
    fn product_sign(&self, rows: u64) -> bool {
        self.product(rows).2.rem_euclid(4) == 2
    }

    /// Ordered product of the rows selected by `rows` as packed X bits,
    /// Z bits and power of i.
    fn product(&self, rows: u64) -> (u64, u64, i64) {
        let (mut sx, mut sz, mut phase) = (0u64, 0u64, 0i64);
        let mut m = rows;
        while m != 0 {
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            let (rx, rz) = self.row(k);
            phase += 2 * ((self.r >> k) & 1) as i64 + product_phase(sx, sz, rx, rz);
            sx ^= rx;
            sz ^= rz;
        }
        (sx, sz, phase)
    }

    /// Z measurement returning +1 or -1.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<i8, SimError> {
        self.check(q)?;
        let stab = self.stab_mask();
        let hits = self.x[q] & stab;
        if hits == 0 {
            return Ok(self.peek_z(q).expect("deterministic outcome"));
        }
        let p = hits.trailing_zeros() as usize;
        let others = self.x[q] & !(1u64 << p);
        self.rowsum_into(p, others);
        // destabilizer p-n takes the old stabilizer row p
        let d = p - self.n;
        let (pb, db) = (1u64 << p, 1u64 << d);
        for j in 0..self.n {
            self.x[j] = (self.x[j] & !db) | if self.x[j] & pb != 0 { db } else { 0 };
            self.z[j] = (self.z[j] & !db) | if self.z[j] & pb != 0 { db } else { 0 };
            self.x[j] &= !pb;
            self.z[j] &= !pb;
        }
        self.r = (self.r & !db) | if self.r & pb != 0 { db } else { 0 };
        self.z[q] |= pb;
        let minus = draw_outcome(0.5, rng);
        self.r = if minus { self.r | pb } else { self.r & !pb };
        Ok(if minus { -1 } else { 1 })
    }

    pub fn measure_basis<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<i8, SimError> {
        self.check(q)?;
        match basis {
            Basis::Z => self.measure_z(q, rng),
            Basis::X => {
                self.h(q);
                let m = self.measure_z(q, rng);
                self.h(q);
                m
            }
            Basis::Y => {
                self.sdg(q);
                self.h(q);
                let m = self.measure_z(q, rng);
                self.h(q);
                self.s(q);
                m
            }
        }
    }

    /// Expectation of a Pauli observable: 0 if it anticommutes with some
    /// stabilizer, else +1 or -1.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        assert_eq!(p.len(), self.n, "Pauli string length mismatch");
        let (mut px, mut pz) = (0u64, 0u64);
        for (q, l) in p.support() {
            px |= (l.x_bit() as u64) << q;
            pz |= (l.z_bit() as u64) << q;
        }
        let anticommutes = |k: usize| {
            let (rx, rz) = self.row(k);
            ((rx & pz) ^ (rz & px)).count_ones() % 2 == 1
        };
        if (self.n..2 * self.n).any(anticommutes) {
            return 0.0;
        }
        let rows: u64 = (0..self.n)
            .filter(|&k| anticommutes(k))
            .map(|k| 1u64 << (k + self.n))
            .sum();
        let (sx, sz, phase) = self.product(rows);
        debug_assert_eq!((sx, sz), (px, pz));
        let rel = (phase - p.phase() as i64).rem_euclid(4);
        match rel {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        }
    }

    /// Symplectic consistency: destabilizer `i` anticommutes only with
    /// stabilizer `i`, all other row pairs commute.
    pub fn is_valid(&self) -> bool {
        let rows: Vec<(u64, u64)> = (0..2 * self.n).map(|k| self.row(k)).collect();
        for i in 0..2 * self.n {
            for j in i + 1..2 * self.n {
                let (xi, zi) = rows[i];
                let (xj, zj) = rows[j];
                let anti = ((xi & zj) ^ (zi & xj)).count_ones() % 2 == 1;
                let expect = i < self.n && j == i + self.n;
                if anti != expect {
                    return false;
                }
            }
        }
        true
    }
}

impl Backend for Tableau {
    fn zeroed(n: usize) -> Result<Self, SimError> {
        Tableau::new(n)
    }

    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply_gate(&mut self, op: &GateOp) -> Result<(), SimError> {
        self.apply_clifford(op)
    }

    fn apply_pauli_at(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.px(q),
            Pauli::Y => self.py(q),
            Pauli::Z => self.pz(q),
        }
    }

    fn measure_bit<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<bool, SimError> {
        Ok(self.measure_basis(q, basis, rng)? == -1)
    }
}
