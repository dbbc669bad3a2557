//! Monte Carlo experiments over the gadget library.
//!
//! An experiment is a list of jobs, one gadget each, and every job is run
//! under one or more measurement settings (a Pauli basis per output
//! register). For each setting `shots` noisy runs are executed; runs with a
//! `-1` on any flag bit are discarded, the rest are read out destructively
//! and decoded with the lookup table. Outcomes are kept as histograms so
//! that confidence intervals can be obtained by multinomial resampling.
//!
//! Shot `k` of the `j`-th (job, setting) pair uses the random stream
//! `j * shots + k` of the master seed, which makes results independent of
//! how shots are distributed over threads.

pub mod config;
pub mod report;
pub mod stats;

pub use config::{BackendChoice, ExperimentConfig};
pub use report::{emit_report, ExperimentStats, ReportFormat, ScalingPoint, ScalingReport};
pub use stats::{loglog_slope, resample_ci, Interval, StatsError};

use crate::backend::{Backend, SimError};
use crate::circuit::{compact_qubits, expand_to_native, Basis, Circuit, Pauli, PauliString};
use crate::gadgets::{self, Gadget, GadgetError, MagicStage};
use crate::noise::{execute_from, shot_rng, ExecOptions, NoiseError, NoiseParams, Sampled, ShotRecord};
use crate::stabilizer::Tableau;
use crate::statevector::StateVector;
use crate::steane::fidelity::{label, logical_fidelity, parse_label, FidelityError, LogicalExpectations, Target};
use crate::steane::tomography::{reconstruct_process, reconstruct_state, TomographyError};
use crate::steane::{decoded_parity, distance_to_coset, ideal_ec_logical, STEANE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("unsupported value {value:?} for {key}")]
    UnknownVariant { key: String, value: String },
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("shots must be at least 1")]
    ZeroShots,
    #[error("a scaling study needs at least 3 noise multipliers, got {0}")]
    InsufficientPoints(usize),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Tomography(#[from] TomographyError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One gadget and the settings it is measured in.
struct Job {
    /// Distinguishes jobs of one experiment in report keys; empty when the
    /// experiment has a single job.
    key: String,
    gadget: Gadget,
    settings: Vec<Vec<Pauli>>,
    labels: Vec<String>,
    tomography: bool,
}

fn variant_err(key: &str, value: &str) -> HarnessError {
    HarnessError::UnknownVariant {
        key: key.to_string(),
        value: value.to_string(),
    }
}

/// Measurement settings and reported labels for a target.
fn plan_settings(target: Target, tomography: bool) -> (Vec<Vec<Pauli>>, Vec<String>) {
    let n = target.n_logical();
    if tomography {
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let settings = (0..3usize.pow(n as u32))
            .map(|k| (0..n).map(|r| letters[k / 3usize.pow(r as u32) % 3]).collect())
            .collect();
        let labels = (1..4usize.pow(n as u32))
            .map(|k| label(&(0..n).map(|r| Pauli::ALL[k >> (2 * r) & 3]).collect::<Vec<_>>()))
            .collect();
        return (settings, labels);
    }
    let labels: Vec<String> = target.formula().1.iter().map(|(l, _)| l.to_string()).collect();
    let mut settings: Vec<Vec<Pauli>> = Vec::new();
    for l in &labels {
        let s: Vec<Pauli> = parse_label(l, n)
            .expect("formula labels are valid")
            .into_iter()
            .map(|p| if p == Pauli::I { Pauli::Z } else { p })
            .collect();
        if !settings.contains(&s) {
            settings.push(s);
        }
    }
    (settings, labels)
}

fn job(key: &str, gadget: Gadget, tomography: bool) -> Job {
    let (settings, labels) = plan_settings(gadget.target, tomography);
    Job {
        key: key.to_string(),
        gadget,
        settings,
        labels,
        tomography,
    }
}

fn plan(cfg: &ExperimentConfig) -> Result<Vec<Job>, HarnessError> {
    let tomo = cfg.flag("tomography", false)?;
    Ok(match cfg.experiment.as_str() {
        "pauli_prep" => {
            let state = cfg.get("state").unwrap_or("0");
            let ft = cfg.flag("ft", true)?;
            let g = gadgets::build_pauli_prep(state, ft).map_err(|_| variant_err("state", state))?;
            vec![job("", g, tomo)]
        }
        "cnot" => {
            let input = cfg.get("input").unwrap_or("00");
            let g = gadgets::build_logical_cnot(input).map_err(|_| variant_err("input", input))?;
            vec![job("", g, tomo)]
        }
        "magic_state" => {
            let name = cfg.get("stage").unwrap_or("ed");
            let stage = MagicStage::ALL
                .into_iter()
                .find(|s| s.name() == name)
                .ok_or_else(|| variant_err("stage", name))?;
            vec![job("", gadgets::build_magic(stage), tomo)]
        }
        "t_injection" => match cfg.get("input").unwrap_or("0") {
            "all" => ["0", "1", "+", "+i"]
                .iter()
                .map(|s| Ok(job(s, gadgets::build_t_injection(s)?, true)))
                .collect::<Result<_, HarnessError>>()?,
            s => vec![job("", gadgets::build_t_injection(s).map_err(|_| variant_err("input", s))?, tomo)],
        },
        other => return Err(HarnessError::UnknownExperiment(other.to_string())),
    })
}

fn basis_of(p: Pauli) -> Basis {
    match p {
        Pauli::X => Basis::X,
        Pauli::Y => Basis::Y,
        _ => Basis::Z,
    }
}

/// Basis actually measured, and the sign applied to the decoded value, to
/// read logical `p` after the post-processed rotation `R`, which maps the
/// Bloch vector `(x, y, z)` to `(z, y, -x)`.
fn through_r(p: Pauli) -> (Pauli, i8) {
    match p {
        Pauli::X => (Pauli::Z, 1),
        Pauli::Z => (Pauli::X, -1),
        other => (other, 1),
    }
}

/// A (job, setting) pair compiled for one backend.
struct Prepared {
    /// Readout circuits; with gate injection, index 1 is the readout used
    /// when `R` must be applied.
    circuits: Vec<Circuit>,
    /// Common prefix executed before the correction is decided.
    prefix: Option<Circuit>,
    options: ExecOptions,
    register_bits: Vec<Vec<[usize; 7]>>,
    bases: Vec<Vec<Pauli>>,
    signs: Vec<Vec<i8>>,
    injection: Option<([usize; 7], i8)>,
    /// Expected decoded parity of register 0, when the distance histogram
    /// applies.
    category_odd: Option<bool>,
    n_qubits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EngineKind {
    Tableau,
    StateVector,
}

fn prepare(
    g: &Gadget,
    setting: &[Pauli],
    native: bool,
    engine: EngineKind,
    with_categories: bool,
) -> Result<Prepared, HarnessError> {
    let mut variants: Vec<(Vec<Pauli>, Vec<i8>)> = vec![(setting.to_vec(), vec![1; setting.len()])];
    if g.injection.is_some() {
        let (b, s): (Vec<Pauli>, Vec<i8>) = setting.iter().map(|&p| through_r(p)).unzip();
        variants.push((b, s));
    }
    let transform = |c: Circuit| if native { expand_to_native(&c, 1) } else { c };
    let prefix_len = transform(g.circuit.clone()).len();
    let mut circuits = Vec::new();
    let mut register_bits = Vec::new();
    for (bases, _) in &variants {
        let b: Vec<Basis> = bases.iter().map(|&p| basis_of(p)).collect();
        let (c, bits) = g.with_readout(&b);
        circuits.push(transform(c));
        register_bits.push(bits);
    }
    if engine == EngineKind::StateVector {
        circuits = circuits.iter().map(|c| compact_qubits(c).0).collect();
    }
    let n_qubits = circuits.iter().map(Circuit::n_qubits).max().unwrap_or(0);
    let prefix = g.injection.as_ref().map(|_| {
        let mut p = Circuit::new(n_qubits);
        for op in &circuits[0].ops()[..prefix_len] {
            p.push(*op).expect("prefix of a valid circuit");
        }
        debug_assert!(circuits.iter().all(|c| c.ops()[..prefix_len] == p.ops()[..]));
        p
    });
    let category_odd = if with_categories {
        let (_, terms) = g.target.formula();
        let ideal = g.target.ideal_expectations().get(terms[0].0)?.value;
        let sign = if setting[0] == Pauli::Y { -1.0 } else { 1.0 };
        Some(ideal * sign < 0.0)
    } else {
        None
    };
    let options = ExecOptions::stop_on(&g.flag_bits, circuits[0].n_classical());
    let (bases, signs) = variants.into_iter().unzip();
    Ok(Prepared {
        circuits,
        prefix,
        options,
        register_bits,
        bases,
        signs,
        injection: g.injection.as_ref().map(|i| (i.y_bits, i.r_on)),
        category_odd,
        n_qubits,
    })
}

/// Per-(job, setting) counters. `hist[0]` counts rejected shots and
/// `hist[1 + m]` accepted shots whose decoded register values have the
/// sign pattern `m` (bit `r` set for `-1` on register `r`).
#[derive(Debug, Clone)]
struct Tally {
    hist: Vec<u64>,
    categories: [u64; 4],
    error: Option<SimError>,
}

impl Tally {
    fn new(n_regs: usize) -> Self {
        Tally {
            hist: vec![0; 1 + (1 << n_regs)],
            categories: [0; 4],
            error: None,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
        for (a, b) in self.categories.iter_mut().zip(&other.categories) {
            *a += b;
        }
        self.error = self.error.or(other.error);
        self
    }
}

enum ShotOutcome {
    Rejected,
    Accepted { mask: usize, category: Option<u8> },
}

fn bits_of(rec: &ShotRecord, bits: &[usize; 7]) -> u8 {
    bits.iter().enumerate().map(|(k, &b)| (rec.bits[b] as u8) << k).sum()
}

fn logical_for(p: Pauli) -> PauliString {
    match p {
        Pauli::X => STEANE.logical_x(),
        Pauli::Y => STEANE.logical_y(),
        _ => STEANE.logical_z(),
    }
}

fn run_shot<B: Backend>(p: &Prepared, noise: &NoiseParams, seed: u64, index: u64) -> Result<ShotOutcome, SimError> {
    let mut rng: ChaCha8Rng = shot_rng(seed, index);
    let mut backend = B::zeroed(p.n_qubits)?;
    let mut rec = ShotRecord::default();
    let mut faults = Sampled(noise);
    let variant = match (&p.prefix, p.injection) {
        (Some(prefix), Some((y_bits, r_on))) => {
            execute_from(prefix, 0, &mut backend, &mut faults, &p.options, &mut rec, &mut rng)?;
            if rec.aborted {
                return Ok(ShotOutcome::Rejected);
            }
            // Y_L = -Y^7: the decoded value is +1 for odd corrected parity
            let y = if decoded_parity(bits_of(&rec, &y_bits)) { 1 } else { -1 };
            let v = usize::from(y == r_on);
            execute_from(&p.circuits[v], prefix.len(), &mut backend, &mut faults, &p.options, &mut rec, &mut rng)?;
            v
        }
        _ => {
            execute_from(&p.circuits[0], 0, &mut backend, &mut faults, &p.options, &mut rec, &mut rng)?;
            0
        }
    };
    if rec.aborted {
        return Ok(ShotOutcome::Rejected);
    }
    let mut mask = 0;
    for (r, bits) in p.register_bits[variant].iter().enumerate() {
        let raw = bits_of(&rec, bits);
        let value = ideal_ec_logical(raw, &logical_for(p.bases[variant][r])).expect("valid logical")
            * p.signs[variant][r];
        if value < 0 {
            mask |= 1 << r;
        }
    }
    let category = p
        .category_odd
        .map(|odd| distance_to_coset(bits_of(&rec, &p.register_bits[variant][0]), odd));
    Ok(ShotOutcome::Accepted { mask, category })
}

fn run_prepared<B: Backend>(p: &Prepared, n_regs: usize, cfg: &ExperimentConfig, offset: u64) -> Result<Tally, SimError> {
    B::zeroed(p.n_qubits)?;
    let tally = crate::par::fold_range(
        cfg.parallel,
        cfg.shots,
        || Tally::new(n_regs),
        |mut t, k| {
            if t.error.is_some() {
                return t;
            }
            match run_shot::<B>(p, &cfg.noise, cfg.seed, offset + k) {
                Ok(ShotOutcome::Rejected) => t.hist[0] += 1,
                Ok(ShotOutcome::Accepted { mask, category }) => {
                    t.hist[1 + mask] += 1;
                    if let Some(d) = category {
                        t.categories[d as usize] += 1;
                    }
                }
                Err(e) => t.error = Some(e),
            }
            t
        },
        Tally::merge,
    );
    match tally.error {
        Some(e) => Err(e),
        None => Ok(tally),
    }
}

fn choose_engine(cfg: &ExperimentConfig, clifford: bool) -> Result<EngineKind, HarnessError> {
    match (cfg.backend, clifford) {
        (BackendChoice::Stabilizer, false) => Err(HarnessError::BackendMismatch(format!(
            "{} contains non-Clifford gates; use the statevector or auto backend",
            cfg.experiment
        ))),
        (BackendChoice::Stabilizer, true) | (BackendChoice::Auto, true) => Ok(EngineKind::Tableau),
        _ => Ok(EngineKind::StateVector),
    }
}

/// Mean decoded value of the logical product `label` pooled over every
/// setting that measures it, with the number of contributing shots.
fn pooled_mean(label: &str, settings: &[Vec<Pauli>], hists: &[Vec<u64>]) -> (f64, u64) {
    let n_regs = settings.first().map_or(0, Vec::len);
    let factors = parse_label(label, n_regs).expect("planned label");
    let mut sum = 0i64;
    let mut n = 0u64;
    for (s, h) in settings.iter().zip(hists) {
        let matches = factors.iter().zip(s).all(|(f, b)| *f == Pauli::I || f == b);
        if !matches {
            continue;
        }
        for (m, &c) in h[1..].iter().enumerate() {
            let odd = factors
                .iter()
                .enumerate()
                .filter(|(r, f)| **f != Pauli::I && m >> r & 1 == 1)
                .count()
                % 2
                == 1;
            sum += if odd { -(c as i64) } else { c as i64 };
            n += c;
        }
    }
    (if n == 0 { f64::NAN } else { sum as f64 / n as f64 }, n)
}

fn expectations_of(job: &Job, hists: &[Vec<u64>]) -> LogicalExpectations {
    let mut e = LogicalExpectations::new();
    for l in &job.labels {
        let (m, n) = pooled_mean(l, &job.settings, hists);
        if n > 0 {
            e.values.insert(l.clone(), crate::steane::fidelity::Estimate::from_mean(m, n));
        }
    }
    e
}

/// Acceptance followed by, per job, every label mean and the fidelity.
fn statistic(jobs: &[Job], hists: &[Vec<u64>]) -> Vec<f64> {
    let total: u64 = hists.iter().flatten().sum();
    let rejected: u64 = hists.iter().map(|h| h[0]).sum();
    let mut out = vec![(total - rejected) as f64 / total as f64];
    let mut k = 0;
    for j in jobs {
        let h = &hists[k..k + j.settings.len()];
        k += j.settings.len();
        let e = expectations_of(j, h);
        for l in &j.labels {
            out.push(e.get(l).map_or(f64::NAN, |x| x.value));
        }
        out.push(logical_fidelity(&e, j.gadget.target).map_or(f64::NAN, |f| f.value));
    }
    out
}

/// Number of resamples behind every confidence interval.
pub const RESAMPLES: usize = 1000;
/// Confidence level of reported intervals.
pub const CI_LEVEL: f64 = 0.68;

/// Runs the configured experiment and aggregates its statistics.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentStats, HarnessError> {
    cfg.validate()?;
    let jobs = plan(cfg)?;
    let native = cfg.flag("native", false)?;
    let mut hists = Vec::new();
    let mut categories = None;
    let mut offset = 0u64;
    for j in &jobs {
        let circuit = if native { expand_to_native(&j.gadget.circuit, 1) } else { j.gadget.circuit.clone() };
        let engine = choose_engine(cfg, circuit.is_clifford())?;
        let with_categories = jobs.len() == 1
            && j.settings.len() == 1
            && j.gadget.target.n_logical() == 1
            && j.gadget.target.stabilizer_labels().is_some();
        let n_regs = j.gadget.registers.len();
        for s in &j.settings {
            let p = prepare(&j.gadget, s, native, engine, with_categories)?;
            let t = match engine {
                EngineKind::Tableau => run_prepared::<Tableau>(&p, n_regs, cfg, offset)?,
                EngineKind::StateVector => run_prepared::<StateVector>(&p, n_regs, cfg, offset)?,
            };
            offset += cfg.shots;
            if with_categories {
                categories = Some(t.categories);
            }
            hists.push(t.hist);
        }
    }
    summarize(cfg, &jobs, hists, categories)
}

fn summarize(
    cfg: &ExperimentConfig,
    jobs: &[Job],
    hists: Vec<Vec<u64>>,
    categories: Option<[u64; 4]>,
) -> Result<ExperimentStats, HarnessError> {
    let point = statistic(jobs, &hists);
    // resampling uses its own stream so that it never overlaps shot streams
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_c1c1_5eed_c1c1);
    let cis = resample_ci(&hists, |h| statistic(jobs, h), CI_LEVEL, RESAMPLES, &mut rng)?;
    let shots_total: u64 = hists.iter().flatten().sum();
    let shots_accepted = shots_total - hists.iter().map(|h| h[0]).sum::<u64>();
    let mut stats = ExperimentStats {
        config: cfg.clone(),
        gadgets: jobs.iter().map(|j| j.gadget.name.clone()).collect(),
        shots_total,
        shots_accepted,
        acceptance_rate: point[0],
        ci68: cis[0],
        categories,
        expectations: Default::default(),
        fidelities: Default::default(),
        matrices: None,
        settings: Vec::new(),
    };
    let mut k = 1;
    let mut h0 = 0;
    let mut process_inputs = Vec::new();
    for j in jobs {
        let h = &hists[h0..h0 + j.settings.len()];
        h0 += j.settings.len();
        for (s, counts) in j.settings.iter().zip(h) {
            stats.settings.push(report::SettingCounts {
                job: j.key.clone(),
                bases: label(s).replace(['1', '2'], ""),
                counts: counts.clone(),
            });
        }
        let e = expectations_of(j, h);
        let prefix = if j.key.is_empty() { String::new() } else { format!("{}:", j.key) };
        for l in &j.labels {
            if let Ok(x) = e.get(l) {
                stats.expectations.insert(format!("{prefix}{l}"), x.into());
            }
            k += 1;
        }
        let fid = logical_fidelity(&e, j.gadget.target).ok();
        let name = if j.key.is_empty() {
            j.gadget.target.name().to_string()
        } else {
            format!("{}->{}", j.key, j.gadget.target.name())
        };
        if let Some(f) = fid {
            stats.fidelities.insert(
                name,
                report::FidelityReport {
                    value: f.value,
                    stderr: f.error,
                    ci68: cis[k],
                },
            );
        }
        k += 1;
        if j.tomography {
            let n = j.gadget.target.n_logical();
            if let Ok(rho) = reconstruct_state(&e, n) {
                stats
                    .matrices
                    .get_or_insert_with(Default::default)
                    .insert(format!("{prefix}rho"), (&rho).into());
            }
            process_inputs.push(e);
        }
    }
    if jobs.len() == 4 && process_inputs.len() == 4 && cfg.experiment == "t_injection" {
        let chi = reconstruct_process(&process_inputs)?;
        stats
            .matrices
            .get_or_insert_with(Default::default)
            .insert("chi".to_string(), (&chi).into());
    }
    Ok(stats)
}

/// Logical error rates of the FT and non-FT preparation of a Pauli state
/// at each multiple of the configured noise, with log-log slope fits.
pub fn run_scaling(cfg: &ExperimentConfig, multipliers: &[f64]) -> Result<ScalingReport, HarnessError> {
    if multipliers.len() < 3 {
        return Err(HarnessError::InsufficientPoints(multipliers.len()));
    }
    let state = cfg.get("state").unwrap_or("0").to_string();
    let mut points = Vec::new();
    for &m in multipliers {
        let mut rates = [0.0; 2];
        let mut errors = [0.0; 2];
        let mut acceptance = 0.0;
        for (i, ft) in [true, false].into_iter().enumerate() {
            let mut c = cfg.clone().noise(cfg.noise.scaled(m));
            c.experiment = "pauli_prep".into();
            c.variants.insert("state".into(), state.clone());
            c.variants.insert("ft".into(), ft.to_string());
            let s = run_experiment(&c)?;
            let f = s.fidelities.values().next().expect("one target");
            rates[i] = 1.0 - f.value;
            errors[i] = f.stderr;
            if ft {
                acceptance = s.acceptance_rate;
            }
        }
        points.push(ScalingPoint {
            multiplier: m,
            ft_error: rates[0],
            ft_stderr: errors[0],
            nonft_error: rates[1],
            nonft_stderr: errors[1],
            ft_acceptance: acceptance,
        });
    }
    let fit = |pick: fn(&ScalingPoint) -> f64, name: &str| -> Result<(f64, Vec<f64>), HarnessError> {
        let pts: Vec<(f64, f64)> = points.iter().map(|p| (p.multiplier, pick(p))).collect();
        let (slope, skipped) = loglog_slope(&pts)?;
        let excluded: Vec<f64> = skipped.iter().map(|&k| pts[k].0).collect();
        for m in &excluded {
            log::warn!("{name}: no logical errors at multiplier {m}; point excluded from the fit");
        }
        Ok((slope, excluded))
    };
    let (slope_ft, excluded_ft) = fit(|p| p.ft_error, "ft")?;
    let (slope_nonft, excluded_nonft) = fit(|p| p.nonft_error, "nonft")?;
    Ok(ScalingReport {
        state,
        points,
        slope_ft,
        slope_nonft,
        excluded_ft,
        excluded_nonft,
    })
}

type Expectation = Box<dyn Fn(&PauliString) -> f64>;

/// Noiseless logical fidelity of a gadget, computed from exact logical
/// expectations of its final state. Measurement randomness comes from
/// `seed`; with gate injection the post-processed `R` is applied to the
/// expectations of the branch that occurred.
pub fn zero_noise_fidelity(g: &Gadget, seed: u64) -> Result<f64, HarnessError> {
    let clifford = g.circuit.is_clifford();
    let (circuit, slots) = if clifford {
        (g.circuit.clone(), (0..g.circuit.n_qubits()).collect())
    } else {
        compact_qubits(&g.circuit)
    };
    let registers: Vec<[usize; 7]> = g.registers.iter().map(|r| r.map(|q| slots[q])).collect();
    let n = circuit.n_qubits();
    let (rec, expect): (ShotRecord, Expectation) = if clifford {
        let (t, rec) = run_noiseless::<Tableau>(&circuit, seed)?;
        (rec, Box::new(move |p| t.expectation(p)))
    } else {
        let (s, rec) = run_noiseless::<StateVector>(&circuit, seed)?;
        (rec, Box::new(move |p| s.expectation(p)))
    };
    if let Some(&b) = g.flag_bits.iter().find(|&&b| rec.bits[b]) {
        return Err(HarnessError::Config(format!("{}: flag c{b} fired without noise", g.name)));
    }
    let k = g.target.n_logical();
    let rotate = g
        .injection
        .as_ref()
        .is_some_and(|inj| (if decoded_parity(bits_of(&rec, &inj.y_bits)) { 1 } else { -1 }) == inj.r_on);
    let mut e = LogicalExpectations::new();
    for code in 1..4usize.pow(k as u32) {
        let factors: Vec<Pauli> = (0..k).map(|j| Pauli::ALL[code >> (2 * j) & 3]).collect();
        let measured: Vec<Pauli> = factors.iter().map(|&p| if rotate { through_r(p).0 } else { p }).collect();
        let sign: i8 = if rotate { factors.iter().map(|&p| through_r(p).1).product() } else { 1 };
        let v = expect(&crate::steane::logical_pauli(n, &registers, &measured)) * sign as f64;
        e.insert(label(&factors), crate::steane::fidelity::Estimate::exact(v.clamp(-1.0, 1.0)))?;
    }
    Ok(logical_fidelity(&e, g.target)?.value)
}

fn run_noiseless<B: Backend>(circuit: &Circuit, seed: u64) -> Result<(B, ShotRecord), SimError> {
    let mut backend = B::zeroed(circuit.n_qubits())?;
    let mut rec = ShotRecord::default();
    let mut no_faults = crate::noise::Fixed(&[]);
    execute_from(circuit, 0, &mut backend, &mut no_faults, &ExecOptions::default(), &mut rec, &mut shot_rng(seed, 0))?;
    Ok((backend, rec))
}
