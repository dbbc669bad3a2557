//! Acceptance report. Prints one PASS/FAIL line per criterion and a summary.
//!
//! Criteria that miss their numeric target are reported, not asserted, so
//! the line shows the measured value. Harness or simulator errors abort.
//! Set `FTLAB_QUICK=1` for a tenth of the shots and doubled tolerances.

mod common;

use ftlab::circuit::Pauli;
use ftlab::gadgets::{build_ft_zero, build_logical_cnot, build_magic, build_nonft_zero, catalog, MagicStage, CNOT_INPUTS};
use ftlab::harness::{run_experiment, run_scaling, zero_noise_fidelity, BackendChoice, ExperimentConfig, ExperimentStats};
use ftlab::noise::NoiseParams;
use ftlab::steane::fidelity::{label, Estimate, LogicalExpectations};
use ftlab::steane::tomography::{reconstruct_process, reconstruct_state, Matrix};
use ftlab::steane::{ideal_ec_logical, lookup_correct, parse_bits, ALL_QUBITS, STEANE};
use ftlab::verifier::{verify, verify_clifford, verify_statevector, DEFAULT_BRANCH_CAP};
use num_complex::Complex64 as C;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

const ZERO_WORDS: [&str; 8] = [
    "0000000", "1010101", "0110011", "1100110", "0001111", "1011010", "0111100", "1101001",
];

struct Run {
    quick: bool,
    results: Vec<(usize, bool)>,
}

impl Run {
    fn shots(&self, full: u64) -> u64 {
        if self.quick {
            full / 10
        } else {
            full
        }
    }

    fn tol(&self, t: f64) -> f64 {
        if self.quick {
            2.0 * t
        } else {
            t
        }
    }

    fn report(&mut self, id: usize, pass: bool, detail: String, started: Instant) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {verdict}  {detail}  [{:.1}s]", started.elapsed().as_secs_f64());
        self.results.push((id, pass));
    }
}

fn run(cfg: ExperimentConfig) -> ExperimentStats {
    run_experiment(&cfg).unwrap_or_else(|e| panic!("{} failed: {e}", cfg.experiment))
}

fn infidelity(s: &ExperimentStats) -> (f64, f64) {
    let f = s.fidelity().expect("single target");
    (1.0 - f.value, f.stderr)
}

fn prep(state: &str, ft: bool, shots: u64, seed: u64) -> ExperimentStats {
    run(ExperimentConfig::new("pauli_prep")
        .variant("state", state)
        .variant("ft", if ft { "true" } else { "false" })
        .shots(shots)
        .seed(seed))
}

fn magic(stage: MagicStage, shots: u64, backend: BackendChoice) -> ExperimentStats {
    run(ExperimentConfig::new("magic_state")
        .variant("stage", stage.name())
        .shots(shots)
        .seed(606)
        .backend(backend))
}

fn criterion_1(r: &mut Run) {
    let t = Instant::now();
    let s = prep("0", true, r.shots(1_000_000), 101);
    let (inf, err) = infidelity(&s);
    let acc = 100.0 * s.acceptance_rate;
    let ok = (inf - 0.0101).abs() <= r.tol(0.0008) && (acc - 84.42).abs() <= r.tol(0.5);
    r.report(1, ok, format!("FT |0>: 1-F = {inf:.5} ± {err:.5} (target 0.0101), acceptance {acc:.2}% (target 84.42%)"), t);
}

fn criterion_2(r: &mut Run) {
    let t = Instant::now();
    let s = prep("0", false, r.shots(1_000_000), 202);
    let (inf, err) = infidelity(&s);
    let ok = (inf - 0.0538).abs() <= r.tol(0.0015);
    r.report(2, ok, format!("non-FT |0>: 1-F = {inf:.5} ± {err:.5} (target 0.0538)"), t);
}

fn criterion_3(r: &mut Run) {
    let t = Instant::now();
    let states = ["0", "1", "+", "-", "+i", "-i"];
    let each: Vec<f64> = states
        .iter()
        .enumerate()
        .map(|(k, s)| infidelity(&prep(s, true, r.shots(1_000_000), 300 + k as u64)).0)
        .collect();
    let mean = each.iter().sum::<f64>() / each.len() as f64;
    let ok = (mean - 0.01203).abs() <= r.tol(0.001);
    let parts: Vec<String> = states.iter().zip(&each).map(|(s, v)| format!("{s}:{v:.4}")).collect();
    r.report(3, ok, format!("mean FT Pauli 1-F = {mean:.5} (target 0.01203) [{}]", parts.join(" ")), t);
}

fn criterion_4(r: &mut Run) {
    let t = Instant::now();
    let mut each = Vec::new();
    for (k, (input, _)) in CNOT_INPUTS.iter().enumerate() {
        let s = run(ExperimentConfig::new("cnot")
            .variant("input", input)
            .shots(r.shots(1_000_000))
            .seed(400 + k as u64));
        each.push((input, infidelity(&s).0));
    }
    let mean = each.iter().map(|(_, v)| v).sum::<f64>() / each.len() as f64;
    let gates = build_logical_cnot("00").expect("valid input").circuit.two_qubit_gate_count();
    let ok = (mean - 0.1035).abs() <= r.tol(0.003) && gates == 29;
    let parts: Vec<String> = each.iter().map(|(i, v)| format!("{i}:{v:.4}")).collect();
    r.report(
        4,
        ok,
        format!("mean CNOT 1-F = {mean:.5} (target 0.1035), entangling gates {gates} (target 29) [{}]", parts.join(" ")),
        t,
    );
}

fn criterion_5(r: &mut Run) {
    let t = Instant::now();
    let sv = BackendChoice::Statevector;
    let zero = run(ExperimentConfig::new("pauli_prep").shots(r.shots(100_000)).seed(505).backend(sv));
    let mh = magic(MagicStage::Hadamard, r.shots(100_000), sv);
    let ed = magic(MagicStage::Full, r.shots(100_000), sv);
    let rows = [
        ("|0>ft", 100.0 * zero.acceptance_rate, 85.0, r.tol(1.0)),
        ("|H>nf+M_H", 100.0 * mh.acceptance_rate, 72.0, r.tol(2.0)),
        ("|H>ft", 100.0 * ed.acceptance_rate, 27.0, r.tol(3.0)),
    ];
    let ok = rows.iter().all(|(_, v, target, tol)| (v - target).abs() <= *tol);
    let parts: Vec<String> = rows
        .iter()
        .map(|(n, v, target, tol)| format!("{n} {v:.2}% ({target}±{tol})"))
        .collect();
    r.report(5, ok, format!("acceptance: {}", parts.join(", ")), t);
}

fn criterion_6(r: &mut Run) {
    let t = Instant::now();
    let stages: Vec<(f64, f64)> = MagicStage::ALL
        .iter()
        .map(|&s| infidelity(&magic(s, r.shots(100_000), BackendChoice::Auto)))
        .collect();
    let separated = |a: (f64, f64), b: (f64, f64)| a.0 - b.0 > 3.0 * (a.1 * a.1 + b.1 * b.1).sqrt();
    let ok = separated(stages[0], stages[1]) && separated(stages[1], stages[2]);
    let parts: Vec<String> = MagicStage::ALL
        .iter()
        .zip(&stages)
        .map(|(s, (v, e))| format!("{} {v:.4}±{e:.4}", s.name()))
        .collect();
    r.report(6, ok, format!("magic 1-F decreasing with 3σ gaps: {}", parts.join(" > ")), t);
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

fn max_deviation(m: &Matrix, rows: &[&[C]]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((m[(i, j)] - v).norm());
        }
    }
    worst
}

fn bloch(x: f64, y: f64, z: f64) -> LogicalExpectations {
    LogicalExpectations::new().with("X1", x).with("Y1", y).with("Z1", z)
}

fn criterion_7(r: &mut Run) {
    let t = Instant::now();
    let mut worst_gadget: (f64, String) = (0.0, String::new());
    let mut checked = 0;
    for g in catalog() {
        // component blocks have no logical target of their own
        if g.is_component() {
            continue;
        }
        let seeds = if g.injection.is_some() { 0..4 } else { 0..1 };
        for seed in seeds {
            let f = zero_noise_fidelity(&g, seed).unwrap_or_else(|e| panic!("{}: {e}", g.name));
            if (1.0 - f).abs() > worst_gadget.0 {
                worst_gadget = ((1.0 - f).abs(), g.name.clone());
            }
        }
        checked += 1;
    }

    let h = FRAC_1_SQRT_2;
    let rho_h = reconstruct_state(&bloch(h, 0.0, h), 1).expect("valid data");
    let dev_h = max_deviation(&rho_h, &[&[re(0.5 * (1.0 + h)), re(0.5 * h)], &[re(0.5 * h), re(0.5 * (1.0 - h))]]);

    let bell = {
        let mut e = LogicalExpectations::new();
        for k in 1..16usize {
            let f = [Pauli::ALL[k & 3], Pauli::ALL[(k >> 2) & 3]];
            let v = match label(&f).as_str() {
                "X1X2" | "Z1Z2" => 1.0,
                "Y1Y2" => -1.0,
                _ => 0.0,
            };
            e.insert(label(&f), Estimate::exact(v)).expect("fresh label");
        }
        e
    };
    let rho_b = reconstruct_state(&bell, 2).expect("valid data");
    let (o, half) = (re(0.0), re(0.5));
    let dev_b = max_deviation(&rho_b, &[&[half, o, o, half], &[o, o, o, o], &[o, o, o, o], &[half, o, o, half]]);
    let impurity = (&rho_b * &rho_b - &rho_b).norm();

    let inputs = [bloch(h, 0.0, h), bloch(-h, 0.0, -h), bloch(h, 0.0, -h), bloch(0.0, 1.0, 0.0)];
    let chi = reconstruct_process(&inputs).expect("four inputs");
    let i = C::new(0.0, 0.5 * h);
    let dev_chi = max_deviation(
        &chi,
        &[&[re(0.5 * (1.0 + h)), o, i, o], &[o, o, o, o], &[-i, o, re(0.5 * (1.0 - h)), o], &[o, o, o, o]],
    );

    let ok = worst_gadget.0 < 1e-9 && dev_h < 1e-9 && dev_b < 1e-9 && impurity < 1e-9 && dev_chi < 1e-9;
    r.report(
        7,
        ok,
        format!(
            "{checked} gadgets, worst |1-F| = {:.1e}{}; rho_H dev {dev_h:.1e}, rho_beta dev {dev_b:.1e}, chi dev {dev_chi:.1e}",
            worst_gadget.0,
            if worst_gadget.1.is_empty() { String::new() } else { format!(" ({})", worst_gadget.1) }
        ),
        t,
    );
}

fn criterion_8(r: &mut Run) {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    let mut check = |name: String, report: ftlab::verifier::Report| {
        ok &= report.pass;
        if !report.pass {
            lines.push(format!("{name} uncorrectable={}", report.counts.uncorrectable));
        }
    };
    check("ft_zero".into(), verify(&build_ft_zero()).expect("verifiable"));
    for (input, _) in CNOT_INPUTS {
        let g = build_logical_cnot(input).expect("valid input");
        check(format!("cnot {input}"), verify(&g).expect("verifiable"));
    }
    check(
        "magic ed".into(),
        verify_statevector(&build_magic(MagicStage::Full), DEFAULT_BRANCH_CAP).expect("verifiable"),
    );
    let nonft = verify_clifford(&build_nonft_zero()).expect("verifiable");
    let witness = nonft.witnesses().find(|w| w.residual_weight == Some(2));
    let witness_ok = !nonft.pass && witness.is_some();
    ok &= witness_ok;
    let witness_text = match witness {
        Some(w) => format!("non-FT witness {:?} -> {}", w.fault, w.residual.as_deref().unwrap_or("?")),
        None => "non-FT witness missing".to_string(),
    };
    let failures = if lines.is_empty() { "all certified".to_string() } else { format!("not certified: {}", lines.join(", ")) };
    r.report(8, ok, format!("{failures}; {witness_text}"), t);
}

fn criterion_9(r: &mut Run) {
    let t = Instant::now();
    let cfg = ExperimentConfig::new("pauli_prep").shots(r.shots(1_000_000)).seed(909);
    let rep = run_scaling(&cfg, &[1.0, 0.5, 0.25, 0.125]).expect("enough points");
    let ok = rep.slope_ft >= 1.8 && rep.slope_nonft <= 1.2;
    r.report(
        9,
        ok,
        format!(
            "slope FT {:.3} (>= 1.8), non-FT {:.3} (<= 1.2), excluded FT {:?} non-FT {:?}",
            rep.slope_ft, rep.slope_nonft, rep.excluded_ft, rep.excluded_nonft
        ),
        t,
    );
}

fn criterion_10(r: &mut Run) {
    let t = Instant::now();
    let words: Vec<u8> = ZERO_WORDS.iter().map(|s| parse_bits(s).expect("7 bits")).collect();
    let code: Vec<u8> = words.iter().flat_map(|&w| [w, w ^ ALL_QUBITS]).collect();
    let mut disagreements = 0;
    for bits in 0u8..128 {
        let nearest = code.iter().min_by_key(|&&c| (c ^ bits).count_ones()).expect("nonempty");
        if lookup_correct(bits).0 != *nearest {
            disagreements += 1;
        }
    }
    let z = STEANE.logical_z();
    let mut failed = 0;
    for &w in &words {
        for e in std::iter::once(0u8).chain((0..7).map(|q| 1u8 << q)) {
            if ideal_ec_logical(w ^ e, &z).expect("valid logical") != 1
                || ideal_ec_logical(w ^ ALL_QUBITS ^ e, &z).expect("valid logical") != -1
            {
                failed += 1;
            }
        }
    }
    let ok = disagreements == 0 && failed == 0;
    r.report(10, ok, format!("{disagreements}/128 decoder disagreements, {failed}/128 EC failures"), t);
}

fn criterion_11(r: &mut Run) {
    let t = Instant::now();
    let (bad, first) = common::cross_backend_mismatches(1000, 0xacce97);
    r.report(11, bad == 0, format!("{bad}/1000 mismatching records{}", first.map(|f| format!(", first {f}")).unwrap_or_default()), t);
}

fn main() {
    let quick = std::env::var("FTLAB_QUICK").is_ok_and(|v| v == "1");
    let mut r = Run { quick, results: Vec::new() };
    if quick {
        println!("quick mode: shots / 10, tolerances doubled");
    }
    // rates used throughout unless a criterion scales them
    assert_eq!(NoiseParams::default(), NoiseParams { p1: 0.005, p2: 0.025, pi: 0.003, pm: 0.003 });
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    criterion_10(&mut r);
    criterion_11(&mut r);
    let passed = r.results.iter().filter(|(_, p)| *p).count();
    let failed: Vec<String> = r.results.iter().filter(|(_, p)| !p).map(|(i, _)| i.to_string()).collect();
    println!("acceptance: {passed}/{} criteria passed{}", r.results.len(), if failed.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", failed.join(", "))
    });
}
