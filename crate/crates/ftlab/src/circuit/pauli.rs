use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Signed n-qubit Pauli operator `i^phase * P_0 (x) P_1 (x) ...`.
///
/// Letters are stored as packed X and Z bit planes; `Y` has both bits set and
/// is the Hermitian Y, not `XZ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    phase: u8,
    xs: Vec<u64>,
    zs: Vec<u64>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            phase: 0,
            xs: vec![0; words(n)],
            zs: vec![0; words(n)],
        }
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(q, p);
        s
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = Self::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    /// Builds a string of `n` qubits carrying `p` on every qubit in `support`.
    pub fn on_support(n: usize, support: &[usize], p: Pauli) -> Self {
        let mut s = Self::identity(n);
        for &q in support {
            s.set(q, p);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Power `k` of the global factor `i^k`, in `0..4`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, k: u8) {
        self.phase = k % 4;
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for {}-qubit Pauli string", self.n);
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits((self.xs[w] >> b) & 1 == 1, (self.zs[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {}-qubit Pauli string", self.n);
        let (w, m) = (q / 64, 1u64 << (q % 64));
        self.xs[w] = if p.x_bit() { self.xs[w] | m } else { self.xs[w] & !m };
        self.zs[w] = if p.z_bit() { self.zs[w] | m } else { self.zs[w] & !m };
    }

    pub fn x_words(&self) -> &[u64] {
        &self.xs
    }

    pub fn z_words(&self) -> &[u64] {
        &self.zs
    }

    pub fn weight(&self) -> usize {
        self.xs
            .iter()
            .zip(&self.zs)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.weight() == 0
    }

    /// Non-identity positions with their letters.
    pub fn support(&self) -> Vec<(usize, Pauli)> {
        (0..self.n)
            .map(|q| (q, self.get(q)))
            .filter(|(_, p)| *p != Pauli::I)
            .collect()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n, "Pauli string length mismatch");
        let mut parity = 0u32;
        for w in 0..self.xs.len() {
            parity ^= ((self.xs[w] & other.zs[w]) ^ (self.zs[w] & other.xs[w])).count_ones();
        }
        parity.is_multiple_of(2)
    }

    /// Product `self * other` with exact phase.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n, other.n, "Pauli string length mismatch");
        let mut phase = self.phase as i64 + other.phase as i64;
        let mut out = PauliString::identity(self.n);
        for w in 0..self.xs.len() {
            let (x1, z1, x2, z2) = (self.xs[w], self.zs[w], other.xs[w], other.zs[w]);
            phase += product_phase(x1, z1, x2, z2);
            out.xs[w] = x1 ^ x2;
            out.zs[w] = z1 ^ z2;
        }
        out.phase = phase.rem_euclid(4) as u8;
        out
    }
}

/// Exponent of `i` picked up when multiplying the packed letters `(x1,z1)`
/// by `(x2,z2)` position-wise, summed over the word.
pub(crate) fn product_phase(x1: u64, z1: u64, x2: u64, z2: u64) -> i64 {
    let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
    let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
    let plus = (px & qy) | (py & qz) | (pz & qx);
    let minus = (px & qz) | (py & qx) | (pz & qy);
    plus.count_ones() as i64 - minus.count_ones() as i64
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.multiply(rhs)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Pauli string {0:?}")]
pub struct ParsePauliError(pub String);

impl FromStr for PauliString {
    type Err = ParsePauliError;

    /// Parses forms such as `XIZ`, `-YY`, `+iXZ`, `-iZ`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePauliError(s.to_string());
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(err()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut p = PauliString::from_letters(&letters);
        p.phase = phase;
        Ok(p)
    }
}
