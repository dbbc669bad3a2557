//! Logical fidelities as linear functionals of logical Pauli expectations.

use crate::circuit::Pauli;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FidelityError {
    #[error("expectation {0:?} is required by the target but missing")]
    MissingOperator(String),
    #[error("expectation {label:?} = {value} lies outside [-1, 1]")]
    OutOfRange { label: String, value: f64 },
    #[error("unknown target {0:?}")]
    UnknownTarget(String),
}

/// A value with a one-sigma uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    /// Mean of `n` samples of a ±1 variable with mean `m`, with its
    /// standard error `sqrt((1 - m^2) / n)`.
    pub fn from_mean(m: f64, n: u64) -> Self {
        let error = if n == 0 { 0.0 } else { ((1.0 - m * m).max(0.0) / n as f64).sqrt() };
        Estimate { value: m, error }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ± {:.6}", self.value, self.error)
    }
}

/// Canonical label of a logical Pauli product: `"Z1"`, `"X1Y2"`, ...
/// Identity factors are omitted; the all-identity product is `"I"`.
pub fn label(factors: &[Pauli]) -> String {
    let s: String = factors
        .iter()
        .enumerate()
        .filter(|(_, p)| **p != Pauli::I)
        .map(|(k, p)| format!("{}{}", p.symbol(), k + 1))
        .collect();
    if s.is_empty() {
        "I".into()
    } else {
        s
    }
}

/// Estimated logical Pauli expectations keyed by [`label`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LogicalExpectations {
    pub values: BTreeMap<String, Estimate>,
}

impl LogicalExpectations {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: impl Into<String>, e: Estimate) -> Result<(), FidelityError> {
        let label = label.into();
        if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&e.value) || e.value.is_nan() {
            return Err(FidelityError::OutOfRange { label, value: e.value });
        }
        self.values.insert(label, e);
        Ok(())
    }

    pub fn with(mut self, label: &str, value: f64) -> Self {
        self.insert(label, Estimate::exact(value)).expect("value in range");
        self
    }

    pub fn get(&self, label: &str) -> Result<Estimate, FidelityError> {
        if label == "I" {
            return Ok(Estimate::exact(1.0));
        }
        self.values
            .get(label)
            .copied()
            .ok_or_else(|| FidelityError::MissingOperator(label.to_string()))
    }
}

/// Intended output state of a logical experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
    /// `|H> = cos(pi/8)|0> + sin(pi/8)|1>`, the +1 eigenstate of `(X+Z)/sqrt2`.
    Magic,
    /// The state orthogonal to `|H>`.
    MagicOrth,
    /// `RY(pi/4)|+>`, Bloch vector `(1, 0, -1)/sqrt2`.
    MagicPlus,
    Pair00,
    Pair01,
    Pair10,
    Pair11,
    /// `(|00> + |11>)/sqrt2`.
    Beta,
    /// `(|00> + i|11>)/sqrt2`, stabilized by `Z1Z2`, `X1Y2`, `Y1X2`.
    Gamma,
}

impl Target {
    pub const PAULI_STATES: [Target; 6] = [
        Target::Zero,
        Target::One,
        Target::Plus,
        Target::Minus,
        Target::PlusI,
        Target::MinusI,
    ];

    pub fn n_logical(self) -> usize {
        use Target::*;
        match self {
            Pair00 | Pair01 | Pair10 | Pair11 | Beta | Gamma => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        use Target::*;
        match self {
            Zero => "0",
            One => "1",
            Plus => "+",
            Minus => "-",
            PlusI => "+i",
            MinusI => "-i",
            Magic => "H",
            MagicOrth => "H_perp",
            MagicPlus => "T+",
            Pair00 => "00",
            Pair01 => "01",
            Pair10 => "10",
            Pair11 => "11",
            Beta => "beta",
            Gamma => "gamma",
        }
    }

    pub fn from_name(s: &str) -> Result<Target, FidelityError> {
        const ALL: [Target; 15] = [
            Target::Zero,
            Target::One,
            Target::Plus,
            Target::Minus,
            Target::PlusI,
            Target::MinusI,
            Target::Magic,
            Target::MagicOrth,
            Target::MagicPlus,
            Target::Pair00,
            Target::Pair01,
            Target::Pair10,
            Target::Pair11,
            Target::Beta,
            Target::Gamma,
        ];
        ALL.into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| FidelityError::UnknownTarget(s.to_string()))
    }

    /// The projector onto the target written as `c0 + sum_k c_k <P_k>`.
    pub fn formula(self) -> (f64, Vec<(&'static str, f64)>) {
        use Target::*;
        let h = 0.5 / SQRT_2;
        match self {
            Zero => (0.5, vec![("Z1", 0.5)]),
            One => (0.5, vec![("Z1", -0.5)]),
            Plus => (0.5, vec![("X1", 0.5)]),
            Minus => (0.5, vec![("X1", -0.5)]),
            PlusI => (0.5, vec![("Y1", 0.5)]),
            MinusI => (0.5, vec![("Y1", -0.5)]),
            Magic => (0.5, vec![("X1", h), ("Z1", h)]),
            MagicOrth => (0.5, vec![("X1", -h), ("Z1", -h)]),
            MagicPlus => (0.5, vec![("X1", h), ("Z1", -h)]),
            Pair00 => (0.25, vec![("Z1", 0.25), ("Z2", 0.25), ("Z1Z2", 0.25)]),
            Pair01 => (0.25, vec![("Z1", 0.25), ("Z2", -0.25), ("Z1Z2", -0.25)]),
            Pair10 => (0.25, vec![("Z1", -0.25), ("Z2", 0.25), ("Z1Z2", -0.25)]),
            Pair11 => (0.25, vec![("Z1", -0.25), ("Z2", -0.25), ("Z1Z2", 0.25)]),
            Beta => (0.25, vec![("X1X2", 0.25), ("Y1Y2", -0.25), ("Z1Z2", 0.25)]),
            Gamma => (0.25, vec![("Z1Z2", 0.25), ("X1Y2", 0.25), ("Y1X2", 0.25)]),
        }
    }

    /// Generators of the target's stabilizer group, or `None` for
    /// non-stabilizer states.
    pub fn stabilizer_labels(self) -> Option<&'static [&'static str]> {
        use Target::*;
        Some(match self {
            Zero | One => &["Z1"],
            Plus | Minus => &["X1"],
            PlusI | MinusI => &["Y1"],
            Pair00 | Pair01 | Pair10 | Pair11 => &["Z1", "Z2"],
            Beta => &["X1X2", "Z1Z2"],
            Gamma => &["Z1Z2", "X1Y2"],
            Magic | MagicOrth | MagicPlus => return None,
        })
    }

    /// Single-qubit amplitudes `(a, b)` of `a|0> + b|1>` for one-qubit targets.
    pub fn amplitudes(self) -> Option<[num_complex::Complex64; 2]> {
        use num_complex::Complex64 as C;
        use Target::*;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (c, s) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let r = |a: f64, b: f64| Some([C::new(a, 0.0), C::new(b, 0.0)]);
        match self {
            Zero => r(1.0, 0.0),
            One => r(0.0, 1.0),
            Plus => r(h, h),
            Minus => r(h, -h),
            PlusI => Some([C::new(h, 0.0), C::new(0.0, h)]),
            MinusI => Some([C::new(h, 0.0), C::new(0.0, -h)]),
            Magic => r(c, s),
            MagicOrth => r(-s, c),
            MagicPlus => r(h * (c - s), h * (c + s)),
            _ => None,
        }
    }

    /// Ideal expectation of every operator the formula uses.
    pub fn ideal_expectations(self) -> LogicalExpectations {
        // each formula is c0 * (1 + sum_k (c_k / c0) <P_k>) with the ideal
        // <P_k> equal to c_k / c0
        let (c0, terms) = self.formula();
        let mut e = LogicalExpectations::new();
        for (l, c) in terms {
            e = e.with(l, c / c0);
        }
        e
    }
}

/// Parses a label produced by [`label`] back into per-qubit factors.
pub fn parse_label(label: &str, n: usize) -> Option<Vec<Pauli>> {
    let mut out = vec![Pauli::I; n];
    if label == "I" {
        return Some(out);
    }
    let chars: Vec<char> = label.chars().collect();
    if !chars.len().is_multiple_of(2) {
        return None;
    }
    for pair in chars.chunks(2) {
        let p = match pair[0] {
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return None,
        };
        let k = pair[1].to_digit(10)? as usize;
        if k == 0 || k > n {
            return None;
        }
        out[k - 1] = p;
    }
    Some(out)
}

/// Logical fidelity of the target, with Gaussian error propagation of the
/// independent expectation uncertainties.
pub fn logical_fidelity(e: &LogicalExpectations, target: Target) -> Result<Estimate, FidelityError> {
    let (c0, terms) = target.formula();
    let mut value = c0;
    let mut var = 0.0;
    for (l, c) in terms {
        let x = e.get(l)?;
        value += c * x.value;
        var += (c * x.error).powi(2);
    }
    Ok(Estimate { value, error: var.sqrt() })
}
