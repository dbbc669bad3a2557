//! Experiment configuration and its `key=value` file format.

use super::HarnessError;
use crate::noise::NoiseParams;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    /// Stabilizer engine for Clifford circuits, state vector otherwise.
    #[default]
    Auto,
    Stabilizer,
    Statevector,
}

impl FromStr for BackendChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(BackendChoice::Auto),
            "stabilizer" => Ok(BackendChoice::Stabilizer),
            "statevector" => Ok(BackendChoice::Statevector),
            _ => Err(HarnessError::Config(format!("unknown backend {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// `pauli_prep`, `cnot`, `magic_state` or `t_injection`.
    pub experiment: String,
    /// Experiment-specific labels such as `state=+` or `ft=false`.
    pub variants: BTreeMap<String, String>,
    /// Shots per measurement setting.
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseParams,
    pub backend: BackendChoice,
    /// Shard shots over worker threads (only with the `parallel` feature).
    pub parallel: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        ExperimentConfig {
            experiment: experiment.to_string(),
            variants: BTreeMap::new(),
            shots: 1000,
            seed: 0,
            noise: NoiseParams::default(),
            backend: BackendChoice::Auto,
            parallel: true,
            out: None,
        }
    }

    pub fn variant(mut self, key: &str, value: &str) -> Self {
        self.variants.insert(key.to_string(), value.to_string());
        self
    }

    pub fn shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn noise(mut self, noise: NoiseParams) -> Self {
        self.noise = noise;
        self
    }

    pub fn backend(mut self, backend: BackendChoice) -> Self {
        self.backend = backend;
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.variants.get(key).map(String::as_str)
    }

    /// Boolean variant with a default; accepts `true/false/1/0/yes/no`.
    pub fn flag(&self, key: &str, default: bool) -> Result<bool, HarnessError> {
        match self.get(key) {
            None => Ok(default),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(HarnessError::UnknownVariant {
                key: key.to_string(),
                value: v.to_string(),
            }),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.shots == 0 {
            return Err(HarnessError::ZeroShots);
        }
        self.noise.validate()?;
        Ok(())
    }

    /// Applies one `key=value` setting. Known keys set fields; anything else
    /// becomes a variant label.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let num = |v: &str| -> Result<f64, HarnessError> {
            v.parse().map_err(|_| HarnessError::Config(format!("{key}: not a number: {v:?}")))
        };
        let int = |v: &str| -> Result<u64, HarnessError> {
            v.parse().map_err(|_| HarnessError::Config(format!("{key}: not an integer: {v:?}")))
        };
        match key {
            "experiment" => self.experiment = value.to_string(),
            "shots" => self.shots = int(value)?,
            "seed" => self.seed = int(value)?,
            "p1" => self.noise.p1 = num(value)?,
            "p2" => self.noise.p2 = num(value)?,
            "pi" => self.noise.pi = num(value)?,
            "pm" => self.noise.pm = num(value)?,
            "backend" => self.backend = value.parse()?,
            "parallel" => {
                self.parallel = match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => return Err(HarnessError::Config(format!("parallel: {value:?}"))),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            _ => {
                self.variants.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// Reads `key=value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = ExperimentConfig::new("");
        cfg.apply(text)?;
        Ok(cfg)
    }

    /// Layers the settings of a config text over `self`.
    pub fn apply(&mut self, text: &str) -> Result<(), HarnessError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }
}
