//! Result records and their JSON / CSV serializations.

use super::{ExperimentConfig, HarnessError, Interval};
use crate::steane::fidelity::Estimate;
use crate::steane::tomography::MatrixJson;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub value: f64,
    pub stderr: f64,
}

impl From<Estimate> for ExpectationReport {
    fn from(e: Estimate) -> Self {
        ExpectationReport {
            value: e.value,
            stderr: e.error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub value: f64,
    pub stderr: f64,
    pub ci68: Interval,
}

/// Raw outcome histogram of one measurement setting: `counts[0]` is the
/// number of rejected shots, `counts[1 + m]` the accepted shots with
/// decoded sign pattern `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingCounts {
    pub job: String,
    pub bases: String,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub config: ExperimentConfig,
    pub gadgets: Vec<String>,
    pub shots_total: u64,
    pub shots_accepted: u64,
    pub acceptance_rate: f64,
    /// 68% interval of the acceptance rate.
    pub ci68: Interval,
    /// Accepted shots by Hamming distance (0 to 3) of the raw readout to the
    /// intended codeword coset. Only for single-setting Pauli preparations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<[u64; 4]>,
    pub expectations: BTreeMap<String, ExpectationReport>,
    pub fidelities: BTreeMap<String, FidelityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<BTreeMap<String, MatrixJson>>,
    #[serde(default)]
    pub settings: Vec<SettingCounts>,
}

impl ExperimentStats {
    /// The fidelity of a single-target experiment.
    pub fn fidelity(&self) -> Option<&FidelityReport> {
        if self.fidelities.len() == 1 {
            self.fidelities.values().next()
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub multiplier: f64,
    pub ft_error: f64,
    pub ft_stderr: f64,
    pub nonft_error: f64,
    pub nonft_stderr: f64,
    pub ft_acceptance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub state: String,
    pub points: Vec<ScalingPoint>,
    pub slope_ft: f64,
    pub slope_nonft: f64,
    /// Multipliers left out of each fit because no logical error was seen.
    pub excluded_ft: Vec<f64>,
    pub excluded_nonft: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(HarnessError::Config(format!("unknown report format {s:?}"))),
        }
    }
}

/// Writes `stats` as pretty JSON, or as CSV with one row per observable:
/// the acceptance rate, each expectation and each fidelity.
pub fn emit_report<W: Write>(stats: &ExperimentStats, format: ReportFormat, mut out: W) -> Result<(), HarnessError> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, stats)?;
            writeln!(out)?;
        }
        ReportFormat::Csv => {
            writeln!(out, "observable,kind,value,stderr,ci68_lo,ci68_hi")?;
            let n = stats.shots_total as f64;
            let p = stats.acceptance_rate;
            writeln!(
                out,
                "acceptance,rate,{},{},{},{}",
                p,
                (p * (1.0 - p) / n).sqrt(),
                stats.ci68.lo,
                stats.ci68.hi
            )?;
            for (k, e) in &stats.expectations {
                writeln!(out, "{k},expectation,{},{},,", e.value, e.stderr)?;
            }
            for (k, f) in &stats.fidelities {
                writeln!(out, "{k},fidelity,{},{},{},{}", f.value, f.stderr, f.ci68.lo, f.ci68.hi)?;
            }
        }
    }
    Ok(())
}
