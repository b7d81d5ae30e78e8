use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::run::{point_seed, PointSpec, RunRecord, StopRule};
use super::stats::log_grid;
use super::HarnessError;
use crate::circuit::NoiseParams;
use crate::layout::{CodeKind, Cut, Gadget, InterfaceConfig};
use crate::pauli::Basis;

pub fn write_csv<W: Write>(w: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut rd = csv::Reader::from_reader(r);
    rd.deserialize().map(|r| r.map_err(HarnessError::from)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_max_shots() -> u64 {
    StopRule::desk().max_shots
}

fn default_max_errors() -> u64 {
    StopRule::desk().max_errors
}

/// Experiment description read from TOML or JSON. Keys follow the interface
/// configuration, the noise parameters and the stop rule. `d` and `p` may be
/// single values or lists; without `p` the default threshold grid is used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub code: CodeKind,
    pub gadget: Gadget,
    pub basis: Basis,
    #[serde(default)]
    pub cut: Option<Cut>,
    pub d: OneOrMany<usize>,
    #[serde(default)]
    pub p: Option<OneOrMany<f64>>,
    pub gamma: f64,
    #[serde(default = "default_true")]
    pub idle_in_reset_measure_ticks: bool,
    #[serde(default)]
    pub rounds: Option<usize>,
    #[serde(default = "default_max_shots")]
    pub max_shots: u64,
    #[serde(default = "default_max_errors")]
    pub max_errors: u64,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            Some("toml") => Self::from_toml(&text),
            _ => Self::from_json(&text).or_else(|_| Self::from_toml(&text)),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self, HarnessError> {
        toml::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Default threshold grid: 10 log-spaced points in [2e-3, 1e-2].
    pub fn grid(&self) -> Vec<f64> {
        match &self.p {
            Some(p) => p.to_vec(),
            None => log_grid(2e-3, 1e-2, 10),
        }
    }

    pub fn points(&self) -> Result<Vec<PointSpec>, HarnessError> {
        let mut out = Vec::new();
        for d in self.d.to_vec() {
            let mut cfg = InterfaceConfig::new(self.code, self.gadget, d, self.basis);
            if let Some(cut) = self.cut {
                cfg = cfg.with_cut(cut);
            }
            cfg.check()?;
            for p in self.grid() {
                let noise = NoiseParams {
                    p,
                    gamma: self.gamma,
                    idle_in_reset_measure_ticks: self.idle_in_reset_measure_ticks,
                };
                noise.check()?;
                out.push(PointSpec {
                    cfg,
                    noise,
                    rounds: self.rounds,
                    stop: StopRule {
                        max_shots: self.max_shots,
                        max_errors: self.max_errors,
                    },
                    seed: point_seed(self.seed, &cfg, &noise),
                });
            }
        }
        Ok(out)
    }
}
