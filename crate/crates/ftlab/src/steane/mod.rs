//! The 7-qubit color code: definition, lookup decoder and ideal error
//! correction of destructive measurement records.
//!
//! A 7-bit string is stored in a `u8` with bit `k` holding qubit `k`. In the
//! textual form the leftmost character is qubit 0 (position 1), so
//! `"1010101"` is `0b1010101` read right to left.

pub mod fidelity;
pub mod tomography;

use crate::circuit::{Pauli, PauliString};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CodeError {
    #[error("expected 7 binary digits, found {0:?}")]
    BadBitstring(String),
    #[error("logical operator must act on 7 qubits with sign +1 or -1, got {0}")]
    BadLogical(String),
}

/// Which error sector a syndrome refers to. Both sectors share supports, so
/// the arithmetic is identical; the tag documents intent at call sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// X-type errors, read off Z-basis bits with the Z-type generators.
    BitFlips,
    /// Z-type errors, read off X-basis bits with the X-type generators.
    PhaseFlips,
}

/// Generator supports and logical operators of the code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeDefinition {
    /// Supports of `s^(1)`, `s^(2)`, `s^(3)` shared by the X and Z sectors.
    pub supports: [u8; 3],
}

pub const STEANE: CodeDefinition = CodeDefinition {
    // 1010101, 0001111, 0110011
    supports: [0b101_0101, 0b111_1000, 0b110_0110],
};

pub const ALL_QUBITS: u8 = 0x7f;

impl CodeDefinition {
    pub fn x_generators(&self) -> Vec<PauliString> {
        self.supports.iter().map(|&s| support_string(s, Pauli::X)).collect()
    }

    pub fn z_generators(&self) -> Vec<PauliString> {
        self.supports.iter().map(|&s| support_string(s, Pauli::Z)).collect()
    }

    pub fn logical_x(&self) -> PauliString {
        support_string(ALL_QUBITS, Pauli::X)
    }

    pub fn logical_z(&self) -> PauliString {
        support_string(ALL_QUBITS, Pauli::Z)
    }

    /// `Y_L = i X_L Z_L = -Y^7`.
    pub fn logical_y(&self) -> PauliString {
        let mut y = support_string(ALL_QUBITS, Pauli::Y);
        y.negate();
        y
    }

    /// The 8 computational basis states in the support of `|0>_L`, i.e. the
    /// span of the generator supports.
    pub fn codewords(&self) -> [u8; 8] {
        let mut out = [0u8; 8];
        for (m, w) in out.iter_mut().enumerate() {
            for (k, &s) in self.supports.iter().enumerate() {
                if m >> k & 1 == 1 {
                    *w ^= s;
                }
            }
        }
        out
    }

    pub fn syndrome(&self, bits: u8) -> [i8; 3] {
        self.supports
            .map(|s| if (bits & s).count_ones() % 2 == 1 { -1 } else { 1 })
    }

    fn syndrome_index(&self, bits: u8) -> usize {
        self.supports
            .iter()
            .enumerate()
            .map(|(k, &s)| (((bits & s).count_ones() % 2) as usize) << k)
            .sum()
    }

    /// Qubit flipped by the decoder for each nontrivial syndrome index.
    fn table(&self) -> [Option<usize>; 8] {
        let mut t = [None; 8];
        for q in 0..7 {
            t[self.syndrome_index(1 << q)] = Some(q);
        }
        t
    }

    /// Applies the unique weight-0 or weight-1 correction matching the
    /// syndrome. Returns the corrected bits and the flipped qubit index.
    pub fn lookup_correct(&self, bits: u8) -> (u8, Option<usize>) {
        match self.table()[self.syndrome_index(bits)] {
            Some(q) => (bits ^ (1 << q), Some(q)),
            None => (bits, None),
        }
    }
}

fn support_string(mask: u8, p: Pauli) -> PauliString {
    let support: Vec<usize> = (0..7).filter(|q| mask >> q & 1 == 1).collect();
    PauliString::on_support(7, &support, p)
}

pub fn parse_bits(s: &str) -> Result<u8, CodeError> {
    let bad = || CodeError::BadBitstring(s.to_string());
    if s.len() != 7 {
        return Err(bad());
    }
    s.chars().enumerate().try_fold(0u8, |acc, (k, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << k),
        _ => Err(bad()),
    })
}

pub fn format_bits(bits: u8) -> String {
    (0..7).map(|k| if bits >> k & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn syndrome(bits: u8, _sector: Sector) -> [i8; 3] {
    STEANE.syndrome(bits)
}

pub fn lookup_correct(bits: u8) -> (u8, Option<usize>) {
    STEANE.lookup_correct(bits)
}

/// Decoded value (+1/-1) of a transversal logical operator from the
/// destructive measurement of all seven qubits in the operator's basis.
///
/// The record is corrected in software, then the parity over the
/// operator's support is multiplied by its sign.
pub fn ideal_ec_logical(bits: u8, logical: &PauliString) -> Result<i8, CodeError> {
    if logical.len() != 7 || logical.phase() % 2 == 1 {
        return Err(CodeError::BadLogical(logical.to_string()));
    }
    let support: u8 = (0..7)
        .filter(|&q| logical.get(q) != Pauli::I)
        .map(|q| 1u8 << q)
        .sum();
    let (corrected, _) = STEANE.lookup_correct(bits);
    let parity = (corrected & support).count_ones() % 2 == 1;
    let sign_negative = logical.phase() == 2;
    Ok(if parity ^ sign_negative { -1 } else { 1 })
}

/// Decoded parity of a full 7-qubit record: `true` when the corrected
/// string has odd weight.
#[inline]
pub fn decoded_parity(bits: u8) -> bool {
    STEANE.lookup_correct(bits).0.count_ones() % 2 == 1
}

/// Minimal Hamming distance to the coset of bitstrings with decoded parity
/// `odd` (even: the codewords of `|0>_L`).
pub fn distance_to_coset(bits: u8, odd: bool) -> u8 {
    let flip = if odd { ALL_QUBITS } else { 0 };
    STEANE
        .codewords()
        .iter()
        .map(|&c| ((c ^ flip) ^ bits).count_ones() as u8)
        .min()
        .expect("nonempty")
}

/// Logical Pauli product acting on several code blocks of an `n`-qubit
/// register: factor `k` acts transversally on `registers[k]`, with
/// `Y_L = -Y^7`.
pub fn logical_pauli(n: usize, registers: &[[usize; 7]], factors: &[Pauli]) -> PauliString {
    let mut p = PauliString::identity(n);
    for (reg, &f) in registers.iter().zip(factors) {
        for &q in reg {
            p.set(q, f);
        }
        if f == Pauli::Y {
            p.negate();
        }
    }
    p
}

/// Minimal Hamming distance to the codewords of `|0>_L`.
pub fn distance_category(bits: u8) -> u8 {
    distance_to_coset(bits, false)
}

/// Logical effect of a residual Pauli error on one register after ideal
/// error correction, as (X_L applied, Z_L applied).
pub fn decode_residual(x_bits: u8, z_bits: u8) -> (bool, bool) {
    (decoded_parity(x_bits), decoded_parity(z_bits))
}

/// Weight of the lightest Pauli equal to `(x_bits, z_bits)` up to
/// multiplication by stabilizers.
pub fn weight_mod_stabilizers(x_bits: u8, z_bits: u8) -> (u32, u8, u8) {
    let words = STEANE.codewords();
    let mut best = (u32::MAX, x_bits, z_bits);
    for &sx in &words {
        for &sz in &words {
            let (x, z) = (x_bits ^ sx, z_bits ^ sz);
            let w = (x | z).count_ones();
            if w < best.0 {
                best = (w, x, z);
            }
        }
    }
    best
}
