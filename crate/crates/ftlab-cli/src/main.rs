use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ftlab::gadgets;
use ftlab::harness::{self, emit_report, BackendChoice, ExperimentConfig, ReportFormat};
use ftlab::verifier;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "ftlab", version, about = "Fault-tolerance simulator for the 7-qubit color code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write its statistics.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Report format.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Logical error rate of FT and non-FT Pauli preparation against a noise multiplier.
    Scaling {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma-separated multipliers of the noise rates.
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25,0.125")]
        multipliers: Vec<f64>,
    },
    /// Certify a gadget against every single fault.
    Verify {
        /// Gadget name; see `ftlab list`.
        #[arg(long, required_unless_present = "all")]
        gadget: Option<String>,
        /// Verify the whole catalog and print one summary line per gadget.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a gadget circuit in the text format.
    Emit {
        #[arg(long)]
        gadget: String,
        /// Expand CNOTs into native Molmer-Sorensen gates.
        #[arg(long)]
        native: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List gadget names.
    List,
}

#[derive(Args)]
struct ExperimentArgs {
    /// key=value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    /// Experiment variant as key=value, repeatable (state=+, ft=false, input=00, stage=ed, ...).
    #[arg(long = "variant", value_parser = parse_kv)]
    variants: Vec<(String, String)>,
    /// Shots per measurement setting (default 10^6 for Clifford experiments, 10^5 otherwise).
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    pi: Option<f64>,
    #[arg(long)]
    pm: Option<f64>,
    /// auto, stabilizer or statevector.
    #[arg(long)]
    backend: Option<String>,
    /// Run shots on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Use a tenth of the default shot count.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn default_shots(experiment: &str) -> u64 {
    match experiment {
        "magic_state" | "t_injection" => 100_000,
        _ => 1_000_000,
    }
}

impl ExperimentArgs {
    fn build(&self, default_experiment: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(default_experiment);
        let mut shots_set = false;
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            shots_set = text.lines().any(|l| l.trim_start().starts_with("shots"));
            cfg.apply(&text)?;
        }
        let mut set = |k: &str, v: Option<String>| -> Result<()> {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
            Ok(())
        };
        set("experiment", self.experiment.clone())?;
        set("seed", self.seed.map(|x| x.to_string()))?;
        set("p1", self.p1.map(|x| x.to_string()))?;
        set("p2", self.p2.map(|x| x.to_string()))?;
        set("pi", self.pi.map(|x| x.to_string()))?;
        set("pm", self.pm.map(|x| x.to_string()))?;
        set("backend", self.backend.clone())?;
        for (k, v) in &self.variants {
            cfg.set(k, v)?;
        }
        if let Some(s) = self.shots {
            cfg.shots = s;
        } else if !shots_set {
            cfg.shots = default_shots(&cfg.experiment);
        }
        if self.quick {
            cfg.shots = (cfg.shots / 10).max(1);
        }
        if self.sequential {
            cfg.parallel = false;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if cfg.experiment.is_empty() {
            bail!("no experiment given (use --experiment or a config file)");
        }
        Ok(cfg)
    }
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn gadget(name: &str) -> Result<gadgets::Gadget> {
    gadgets::by_name(name).with_context(|| format!("unknown gadget {name:?}; see `ftlab list`"))
}

fn main() -> Result<()> {
    match run() {
        // a closed pipe on stdout (`ftlab ... | head`) is a normal way to stop
        Err(e) if e.chain().any(is_broken_pipe) => Ok(()),
        other => other,
    }
}

fn is_broken_pipe(e: &(dyn std::error::Error + 'static)) -> bool {
    let io = match e.downcast_ref::<harness::HarnessError>() {
        Some(harness::HarnessError::Io(inner)) => Some(inner),
        _ => e.downcast_ref::<io::Error>(),
    };
    io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn run() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run { exp, format } => {
            let cfg = exp.build("")?;
            let format: ReportFormat = format.parse()?;
            let stats = harness::run_experiment(&cfg)?;
            emit_report(&stats, format, writer(cfg.out.as_deref())?)?;
        }
        Command::Scaling { exp, multipliers } => {
            let mut cfg = exp.build("pauli_prep")?;
            if cfg.backend == BackendChoice::Statevector {
                log::warn!("scaling runs Clifford circuits; the statevector backend is much slower");
            }
            cfg.experiment = "pauli_prep".into();
            let report = harness::run_scaling(&cfg, &multipliers)?;
            let mut w = writer(cfg.out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
        }
        Command::Verify { gadget: name, all, out } => {
            let mut w = writer(out.as_deref())?;
            if all {
                for g in gadgets::catalog() {
                    if g.is_component() {
                        writeln!(w, "{:<24} skipped: building block, certified inside magic_ed", g.name)?;
                        continue;
                    }
                    match verifier::verify(&g) {
                        Ok(r) => writeln!(
                            w,
                            "{:<24} {:<11} {} flagged={} correctable={} uncorrectable={} inconclusive={}",
                            r.gadget,
                            r.mode,
                            if r.pass { "PASS" } else { "FAIL" },
                            r.counts.flagged,
                            r.counts.correctable,
                            r.counts.uncorrectable,
                            r.counts.inconclusive
                        )?,
                        Err(e) => writeln!(w, "{:<24} skipped: {e}", g.name)?,
                    }
                }
            } else {
                let g = gadget(name.as_deref().expect("required by clap"))?;
                let report = verifier::verify(&g)?;
                serde_json::to_writer_pretty(&mut w, &report)?;
                writeln!(w)?;
            }
        }
        Command::Emit { gadget: name, native, out } => {
            let mut g = gadget(&name)?;
            if native {
                g.circuit = ftlab::circuit::expand_to_native(&g.circuit, 1);
            }
            write!(writer(out.as_deref())?, "{}", g.to_text())?;
        }
        Command::List => {
            let mut w = io::stdout().lock();
            for g in gadgets::catalog() {
                writeln!(w, "{}", g.name)?;
            }
        }
    }
    Ok(())
}
