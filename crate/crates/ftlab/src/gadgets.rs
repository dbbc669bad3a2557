//! Circuit builders for the logical operations of the color code.
//!
//! Standalone gadgets place their data register on qubits `0..7` and any
//! ancillas after it. Composite protocols (logical CNOT, magic-state
//! preparation, T-gate injection) follow the ion layout of the trapped-ion
//! register: qubits `0..8` are ancillas and qubits `8..15` hold the first
//! data block. A second block reuses qubits `1..8`.

use crate::circuit::{emit_circuit, Basis, Circuit, Gate, Operation};
use crate::steane::fidelity::Target;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("unknown state label {0:?}")]
    UnknownState(String),
    #[error("unknown logical CNOT input {0:?}")]
    UnknownInput(String),
}

pub type Register = [usize; 7];

const LOW: Register = [0, 1, 2, 3, 4, 5, 6];
const HIGH: Register = [8, 9, 10, 11, 12, 13, 14];
const SECOND: Register = [1, 2, 3, 4, 5, 6, 7];

/// Readout bookkeeping for gate injection: register `a` is measured
/// transversally in the Y basis inside the circuit, and the logical
/// correction `R = RY(pi/2)` is applied to the remaining register when the
/// decoded logical Y outcome equals `r_on`.
#[derive(Debug, Clone, PartialEq)]
pub struct Injection {
    pub y_bits: [usize; 7],
    pub r_on: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gadget {
    pub name: String,
    pub circuit: Circuit,
    /// Data registers holding the logical output, in logical-qubit order.
    pub registers: Vec<Register>,
    /// Bits whose -1 outcome discards the run.
    pub flag_bits: Vec<usize>,
    /// Declared logical output at zero noise.
    pub target: Target,
    pub injection: Option<Injection>,
}

impl Gadget {
    /// True for building blocks that expect a prepared input and so have
    /// no logical target of their own.
    pub fn is_component(&self) -> bool {
        COMPONENTS.contains(&self.name.as_str())
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        self.registers.iter().flatten().copied().collect()
    }

    /// Circuit text with `# gadget:` and `# flags:` metadata lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# gadget: {}", self.name).unwrap();
        let flags: Vec<String> = self.flag_bits.iter().map(|b| format!("c{b}")).collect();
        writeln!(s, "# flags: {}", flags.join(" ")).unwrap();
        let data: Vec<String> = self.data_qubits().iter().map(|q| q.to_string()).collect();
        writeln!(s, "# data: {}", data.join(" ")).unwrap();
        s + &emit_circuit(&self.circuit)
    }

    /// The gadget followed by a transversal destructive measurement of
    /// every register in the given basis. Returns the circuit and the seven
    /// bits of each register.
    pub fn with_readout(&self, bases: &[Basis]) -> (Circuit, Vec<[usize; 7]>) {
        assert_eq!(bases.len(), self.registers.len(), "one basis per register");
        let mut c = self.circuit.clone();
        let bits = self
            .registers
            .iter()
            .zip(bases)
            .map(|(reg, &b)| reg.map(|q| c.measure(b, q)))
            .collect();
        (c, bits)
    }
}

/// How a fresh qubit is initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    Prep,
    Reset,
}

fn init(c: &mut Circuit, q: usize, how: Init) {
    match how {
        Init::Prep => c.prep_z(q),
        Init::Reset => c.reset(q),
    };
}

fn init_plus(c: &mut Circuit, q: usize, how: Init) {
    init(c, q, how);
    c.gate1(Gate::RY(FRAC_PI_2), q);
}

/// Register positions prepared in `|+>` by the `|0>_L` encoder; each is
/// the only member of one generator support.
const ZERO_PIVOTS: [usize; 3] = [0, 1, 3];

const ZERO_ENCODER: [(usize, usize); 8] =
    [(0, 4), (1, 6), (0, 2), (1, 2), (3, 5), (3, 4), (4, 6), (1, 5)];

const MAGIC_PIVOTS: [usize; 3] = [1, 3, 6];

const MAGIC_ENCODER: [(usize, usize); 9] = [
    (6, 5),
    (4, 5),
    (3, 5),
    (5, 2),
    (6, 0),
    (1, 0),
    (0, 5),
    (0, 4),
    (3, 0),
];

/// Positions whose joint Z parity is a weight-3 logical Z, checked by the
/// flag after encoding.
const VERIFY_SUPPORT: [usize; 3] = [0, 5, 6];

/// Appends the 8-CX encoder of `|0>_L`.
pub fn encode_zero(c: &mut Circuit, reg: &Register, how: Init) {
    for (k, &q) in reg.iter().enumerate() {
        if ZERO_PIVOTS.contains(&k) {
            init_plus(c, q, how);
        } else {
            init(c, q, how);
        }
    }
    for (a, b) in ZERO_ENCODER {
        c.cx(reg[a], reg[b]);
    }
}

/// Appends the encoder plus the flag check. Returns the flag bit.
pub fn encode_zero_ft(c: &mut Circuit, reg: &Register, flag: usize, how: Init) -> usize {
    encode_zero(c, reg, how);
    init(c, flag, how);
    for k in VERIFY_SUPPORT {
        c.cx(reg[k], flag);
    }
    c.measure(Basis::Z, flag)
}

/// Transversal single-qubit gate taking `|0>_L` to the given Pauli state.
pub fn pauli_state_gate(state: Target) -> Result<Option<Gate>, GadgetError> {
    Ok(match state {
        Target::Zero => None,
        Target::One => Some(Gate::RX(PI)),
        Target::Plus => Some(Gate::RY(FRAC_PI_2)),
        Target::Minus => Some(Gate::RY(-FRAC_PI_2)),
        Target::PlusI => Some(Gate::RX(FRAC_PI_2)),
        Target::MinusI => Some(Gate::RX(-FRAC_PI_2)),
        other => return Err(GadgetError::UnknownState(other.name().to_string())),
    })
}

pub fn transversal(c: &mut Circuit, reg: &Register, gate: Gate) {
    for &q in reg {
        c.gate1(gate, q);
    }
}

pub fn parse_pauli_state(label: &str) -> Result<Target, GadgetError> {
    match label {
        "0" => Ok(Target::Zero),
        "1" => Ok(Target::One),
        "+" => Ok(Target::Plus),
        "-" => Ok(Target::Minus),
        "+i" => Ok(Target::PlusI),
        "-i" => Ok(Target::MinusI),
        _ => Err(GadgetError::UnknownState(label.to_string())),
    }
}

pub fn build_nonft_zero() -> Gadget {
    let mut c = Circuit::new(7);
    encode_zero(&mut c, &LOW, Init::Prep);
    Gadget {
        name: "nonft_zero".into(),
        circuit: c,
        registers: vec![LOW],
        flag_bits: vec![],
        target: Target::Zero,
        injection: None,
    }
}

pub fn build_ft_zero() -> Gadget {
    let mut c = Circuit::new(8);
    let flag = encode_zero_ft(&mut c, &LOW, 7, Init::Prep);
    Gadget {
        name: "ft_zero".into(),
        circuit: c,
        registers: vec![LOW],
        flag_bits: vec![flag],
        target: Target::Zero,
        injection: None,
    }
}

pub fn build_pauli_prep(state: &str, ft: bool) -> Result<Gadget, GadgetError> {
    let target = parse_pauli_state(state)?;
    let mut g = if ft { build_ft_zero() } else { build_nonft_zero() };
    if let Some(gate) = pauli_state_gate(target)? {
        transversal(&mut g.circuit, &LOW, gate);
    }
    g.name = format!("pauli_prep_{}_{}", if ft { "ft" } else { "nonft" }, state);
    g.target = target;
    Ok(g)
}

/// Input rows of the logical CNOT table with their expected outputs.
pub const CNOT_INPUTS: [(&str, Target); 6] = [
    ("00", Target::Pair00),
    ("01", Target::Pair01),
    ("10", Target::Pair11),
    ("11", Target::Pair10),
    ("+0", Target::Beta),
    ("+i0", Target::Gamma),
];

/// Two FT-encoded blocks (control on qubits 8..15 with flag 0, target on
/// qubits 1..8 with flag 15), single-qubit input gates, then 7 pairwise CX.
pub fn build_logical_cnot(input: &str) -> Result<Gadget, GadgetError> {
    let target = CNOT_INPUTS
        .iter()
        .find(|(l, _)| *l == input)
        .map(|(_, t)| *t)
        .ok_or_else(|| GadgetError::UnknownInput(input.to_string()))?;
    let mut c = Circuit::new(16);
    let f1 = encode_zero_ft(&mut c, &HIGH, 0, Init::Prep);
    let f2 = encode_zero_ft(&mut c, &SECOND, 15, Init::Prep);
    let (ga, gb) = match input {
        "00" => (None, None),
        "01" => (None, Some(Gate::RX(PI))),
        "10" => (Some(Gate::RX(PI)), None),
        "11" => (Some(Gate::RX(PI)), Some(Gate::RX(PI))),
        "+0" => (Some(Gate::RY(FRAC_PI_2)), None),
        _ => (Some(Gate::RX(FRAC_PI_2)), None),
    };
    if let Some(g) = ga {
        transversal(&mut c, &HIGH, g);
    }
    if let Some(g) = gb {
        transversal(&mut c, &SECOND, g);
    }
    for k in 0..7 {
        c.cx(HIGH[k], SECOND[k]);
    }
    Ok(Gadget {
        name: format!("logical_cnot_{input}"),
        circuit: c,
        registers: vec![HIGH, SECOND],
        flag_bits: vec![f1, f2],
        target,
        injection: None,
    })
}

/// Position of the seed qubit carrying the physical magic state.
pub const MAGIC_SEED: usize = 4;

/// Appends the non-FT encoder mapping a physical `|H>` on the seed qubit
/// to `|H>_L`.
pub fn encode_magic(c: &mut Circuit, reg: &Register, how: Init) {
    for (k, &q) in reg.iter().enumerate() {
        if MAGIC_PIVOTS.contains(&k) {
            init_plus(c, q, how);
        } else {
            init(c, q, how);
            if k == MAGIC_SEED {
                c.gate1(Gate::RY(FRAC_PI_4), q);
            }
        }
    }
    for (a, b) in MAGIC_ENCODER {
        c.cx(reg[a], reg[b]);
    }
}

/// Controlled Hadamard from `ctrl` onto `t`.
fn controlled_h(c: &mut Circuit, ctrl: usize, t: usize) {
    c.gate1(Gate::RY(FRAC_PI_4), t);
    c.cx(ctrl, t);
    c.gate1(Gate::RY(-FRAC_PI_4), t);
}

/// Flagged measurement of the transversal Hadamard. Returns the syndrome
/// and flag bits.
pub fn measure_hadamard(c: &mut Circuit, reg: &Register, anc: usize, flag: usize, how: Init) -> [usize; 2] {
    init_plus(c, anc, how);
    init(c, flag, how);
    for (k, &q) in reg.iter().enumerate() {
        if k == 6 {
            c.cx(anc, flag);
        }
        controlled_h(c, anc, q);
        if k == 0 {
            c.cx(anc, flag);
        }
    }
    [c.measure(Basis::X, anc), c.measure(Basis::Z, flag)]
}

/// Which stabilizer a flagged readout targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabKind {
    X,
    Z,
}

/// Order in which the six generators are read out: `S_X^1, S_Z^2, S_Z^3`,
/// then `S_Z^1, S_X^2, S_X^3`.
pub const ED_ORDER: [(StabKind, usize); 6] = [
    (StabKind::X, 0),
    (StabKind::Z, 1),
    (StabKind::Z, 2),
    (StabKind::Z, 0),
    (StabKind::X, 1),
    (StabKind::X, 2),
];

/// Flagged weight-4 stabilizer readout. Returns (syndrome bit, flag bit).
pub fn measure_stabilizer(
    c: &mut Circuit,
    reg: &Register,
    kind: StabKind,
    generator: usize,
    anc: usize,
    flag: usize,
    how: Init,
) -> [usize; 2] {
    let support = crate::steane::STEANE.supports[generator];
    let data: Vec<usize> = (0..7).filter(|k| support >> k & 1 == 1).map(|k| reg[k]).collect();
    match kind {
        StabKind::X => {
            init_plus(c, anc, how);
            init(c, flag, how);
        }
        StabKind::Z => {
            init(c, anc, how);
            init_plus(c, flag, how);
        }
    }
    let couple = |c: &mut Circuit, d: usize| match kind {
        StabKind::X => c.cx(anc, d),
        StabKind::Z => c.cx(d, anc),
    };
    let flag_link = |c: &mut Circuit| match kind {
        StabKind::X => c.cx(anc, flag),
        StabKind::Z => c.cx(flag, anc),
    };
    couple(c, data[0]);
    flag_link(c);
    couple(c, data[1]);
    couple(c, data[2]);
    flag_link(c);
    couple(c, data[3]);
    match kind {
        StabKind::X => [c.measure(Basis::X, anc), c.measure(Basis::Z, flag)],
        StabKind::Z => [c.measure(Basis::Z, anc), c.measure(Basis::X, flag)],
    }
}

/// The six flagged readouts on three ancilla pairs, reused once each.
/// Pairs on their first use are initialized with `first`.
pub fn error_detection(c: &mut Circuit, reg: &Register, pairs: [(usize, usize); 3], first: Init) -> Vec<usize> {
    let mut bits = Vec::with_capacity(12);
    for (k, &(kind, gen)) in ED_ORDER.iter().enumerate() {
        let (a, f) = pairs[k % 3];
        let how = if k < 3 { first } else { Init::Reset };
        bits.extend(measure_stabilizer(c, reg, kind, gen, a, f, how));
    }
    bits
}

pub fn build_magic_nonft() -> Gadget {
    let mut c = Circuit::new(7);
    encode_magic(&mut c, &LOW, Init::Prep);
    Gadget {
        name: "magic_nonft".into(),
        circuit: c,
        registers: vec![LOW],
        flag_bits: vec![],
        target: Target::Magic,
        injection: None,
    }
}

/// Names of the catalog entries that are building blocks.
pub const COMPONENTS: [&str; 2] = ["hadamard_measurement", "ed_block"];

/// Hadamard measurement acting on data `0..7` with ancilla 7 and flag 8.
/// Prepend a state preparation on `0..7` to use it.
pub fn build_hadamard_measurement() -> Gadget {
    let mut c = Circuit::new(9);
    let flags = measure_hadamard(&mut c, &LOW, 7, 8, Init::Prep);
    Gadget {
        name: "hadamard_measurement".into(),
        circuit: c,
        registers: vec![LOW],
        flag_bits: flags.to_vec(),
        target: Target::Magic,
        injection: None,
    }
}

/// Error-detection block on data `0..7` with ancilla pairs (7,8), (9,10),
/// (11,12).
pub fn build_ed_block() -> Gadget {
    let mut c = Circuit::new(13);
    let flags = error_detection(&mut c, &LOW, [(7, 8), (9, 10), (11, 12)], Init::Prep);
    Gadget {
        name: "ed_block".into(),
        circuit: c,
        registers: vec![LOW],
        flag_bits: flags,
        target: Target::Zero,
        injection: None,
    }
}

/// Stages of the magic-state protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MagicStage {
    NonFt,
    Hadamard,
    Full,
}

impl MagicStage {
    pub const ALL: [MagicStage; 3] = [MagicStage::NonFt, MagicStage::Hadamard, MagicStage::Full];

    pub fn name(self) -> &'static str {
        match self {
            MagicStage::NonFt => "nonft",
            MagicStage::Hadamard => "mh",
            MagicStage::Full => "ed",
        }
    }
}

fn magic_into(c: &mut Circuit, stage: MagicStage) -> Vec<usize> {
    encode_magic(c, &HIGH, Init::Prep);
    let mut flags = Vec::new();
    if stage >= MagicStage::Hadamard {
        flags.extend(measure_hadamard(c, &HIGH, 0, 1, Init::Prep));
    }
    if stage == MagicStage::Full {
        flags.extend(error_detection(c, &HIGH, [(2, 3), (4, 5), (6, 7)], Init::Prep));
    }
    flags
}

/// Magic-state preparation up to and including `stage`, data on `8..15`.
pub fn build_magic(stage: MagicStage) -> Gadget {
    let mut c = Circuit::new(15);
    let flags = magic_into(&mut c, stage);
    Gadget {
        name: format!("magic_{}", stage.name()),
        circuit: c,
        registers: vec![HIGH],
        flag_bits: flags,
        target: Target::Magic,
        injection: None,
    }
}

/// Logical output of T applied to a Pauli input.
pub fn t_output(input: Target) -> Result<Target, GadgetError> {
    match input {
        Target::Zero => Ok(Target::Magic),
        Target::One => Ok(Target::MagicOrth),
        Target::Plus => Ok(Target::MagicPlus),
        Target::PlusI => Ok(Target::PlusI),
        other => Err(GadgetError::UnknownState(other.name().to_string())),
    }
}

/// Full T-gate injection: FT magic state in block A (qubits 8..15), the
/// ancillas recycled into block B (qubits 1..8, flag 0), transversal CY from
/// A to B and a Y-basis readout of A.
pub fn build_t_injection(target_state: &str) -> Result<Gadget, GadgetError> {
    let input = parse_pauli_state(target_state)?;
    let target = t_output(input)?;
    let mut c = Circuit::new(15);
    let mut flags = magic_into(&mut c, MagicStage::Full);
    flags.push(encode_zero_ft(&mut c, &SECOND, 0, Init::Reset));
    if let Some(g) = pauli_state_gate(input)? {
        transversal(&mut c, &SECOND, g);
    }
    for k in 0..7 {
        c.cy(HIGH[k], SECOND[k]);
    }
    let y_bits = HIGH.map(|q| c.measure(Basis::Y, q));
    Ok(Gadget {
        name: format!("t_injection_{target_state}"),
        circuit: c,
        registers: vec![SECOND],
        flag_bits: flags,
        target,
        injection: Some(Injection { y_bits, r_on: R_ON_Y }),
    })
}

/// Decoded logical Y outcome of block A that requires the `R` correction.
pub const R_ON_Y: i8 = 1;

/// Every gadget with its default parameters, for export and verification.
pub fn catalog() -> Vec<Gadget> {
    let mut out = vec![build_nonft_zero(), build_ft_zero()];
    for s in ["0", "1", "+", "-", "+i", "-i"] {
        out.push(build_pauli_prep(s, true).expect("valid label"));
    }
    for (i, _) in CNOT_INPUTS {
        out.push(build_logical_cnot(i).expect("valid input"));
    }
    out.push(build_hadamard_measurement());
    out.push(build_ed_block());
    for s in MagicStage::ALL {
        out.push(build_magic(s));
    }
    for s in ["0", "1", "+", "+i"] {
        out.push(build_t_injection(s).expect("valid label"));
    }
    out
}

/// Looks up a gadget by its `name`.
pub fn by_name(name: &str) -> Option<Gadget> {
    catalog().into_iter().find(|g| g.name == name)
}

/// True when every two-qubit gate connecting register `a` to register `b`
/// pairs equal positions.
pub fn is_transversal_between(circuit: &Circuit, a: &Register, b: &Register) -> bool {
    circuit.ops().iter().all(|op| match op {
        Operation::Unitary(g) if g.gate.arity() == 2 => {
            let (x, y) = (g.qubits[0], g.qubits[1]);
            match (a.iter().position(|&q| q == x), b.iter().position(|&q| q == y)) {
                (Some(i), Some(j)) => i == j,
                _ => !(a.contains(&x) && b.contains(&y)) && !(b.contains(&x) && a.contains(&y)),
            }
        }
        _ => true,
    })
}
