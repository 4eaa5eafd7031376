//! Run configuration: schema, per-experiment defaults, loading and hashing.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use rydsim_core::devices::{DeviceInstance, GasSwitchSpec, SWITCH_WORK_TIME};
use rydsim_core::engine::EngineKind;
use rydsim_core::experiments::{CHAIN_T_END, GAS_T_END};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Experiment {
    #[serde(rename = "fig3")]
    Fig3,
    #[serde(rename = "fig4")]
    Fig4,
    #[serde(rename = "fig5c")]
    Fig5c,
    #[serde(rename = "fig7-and")]
    Fig7And,
    #[serde(rename = "fig7-nand")]
    Fig7Nand,
    #[serde(rename = "appB")]
    AppB,
    #[serde(rename = "appC")]
    AppC,
    #[serde(rename = "appD")]
    AppD,
    #[serde(rename = "appE")]
    AppE,
    #[serde(rename = "custom")]
    Custom,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Self::Fig3,
        Self::Fig4,
        Self::Fig5c,
        Self::Fig7And,
        Self::Fig7Nand,
        Self::AppB,
        Self::AppC,
        Self::AppD,
        Self::AppE,
        Self::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5c => "fig5c",
            Self::Fig7And => "fig7-and",
            Self::Fig7Nand => "fig7-nand",
            Self::AppB => "appB",
            Self::AppC => "appC",
            Self::AppD => "appD",
            Self::AppE => "appE",
            Self::Custom => "custom",
        }
    }

    /// Experiments whose main output is a scan over `scan`.
    pub fn is_scan(self) -> bool {
        matches!(self, Self::Fig3 | Self::AppD | Self::AppE)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .with_context(|| {
                let names: Vec<_> = Self::ALL.iter().map(|e| e.name()).collect();
                format!(
                    "unknown experiment `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Dephasing and decay rate pair, in units of Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    pub gamma: f64,
    pub kappa: f64,
}

const fn noise(gamma: f64, kappa: f64) -> Noise {
    Noise { gamma, kappa }
}

const NOISY: Noise = noise(1.0, 0.003);
const NOISELESS: Noise = noise(0.0, 0.0);

/// Evenly spaced grid `start, start + step, ..., stop` or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Range {
        start: f64,
        stop: f64,
        points: usize,
    },
    Values(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range {
                start,
                stop,
                points,
            } => match points {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (*n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GasPreset {
    Full,
    Desk,
}

/// Fully resolved run description. Every field has a default for the
/// named experiment; a config file only lists what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Engine override; `None` uses each device's default.
    pub engine: Option<EngineKind>,
    pub omega: f64,
    /// Chain devices: interaction coefficient with `r_f = 1`, `Δ_f = -C6`.
    pub c6: f64,
    /// Extra interaction coefficients for the transport study.
    pub c6_values: Vec<f64>,
    /// Noise settings, one run (or table, or sweep point) each.
    pub noise: Vec<Noise>,
    /// `Δ_g / Δ_f` values (switch, diode).
    pub scan: Grid,
    /// Diode gate ratio for the dephasing sweep.
    pub gate_ratio: f64,
    /// Readout times; empty means the device work time.
    pub readout_times: Vec<f64>,
    pub atoms: usize,
    pub t_end: f64,
    pub samples: usize,
    pub dt: Option<f64>,
    pub seed: u64,
    pub trajectories: usize,
    pub instances: u32,
    pub gas_preset: GasPreset,
    pub gas: Option<GasSwitchSpec>,
    pub device: Option<DeviceInstance>,
}

impl RunConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            engine: None,
            omega: 1.0,
            c6: 10.0,
            c6_values: Vec::new(),
            noise: vec![NOISY],
            scan: Grid::Values(Vec::new()),
            gate_ratio: 2.0,
            readout_times: Vec::new(),
            atoms: 6,
            t_end: CHAIN_T_END,
            samples: 200,
            dt: None,
            seed: 20_240_601,
            trajectories: 10_000,
            instances: 1,
            gas_preset: GasPreset::Full,
            gas: None,
            device: None,
        };
        let full_scan = Grid::Range {
            start: 0.05,
            stop: 3.0,
            points: 60,
        };
        match experiment {
            Experiment::Fig3 => Self {
                scan: full_scan,
                readout_times: vec![SWITCH_WORK_TIME],
                ..base
            },
            Experiment::Fig4 => Self {
                noise: Vec::new(),
                t_end: GAS_T_END,
                trajectories: 30,
                instances: 10,
                ..base
            },
            Experiment::Fig5c => Self {
                noise: vec![NOISELESS, noise(0.25, 0.003), noise(0.5, 0.003), NOISY],
                readout_times: vec![4.0],
                ..base
            },
            Experiment::Fig7And | Experiment::Fig7Nand => Self {
                noise: vec![NOISELESS, NOISY],
                ..base
            },
            Experiment::AppB => Self {
                noise: vec![noise(0.1, 0.003), NOISY, noise(10.0, 0.003)],
                atoms: 3,
                t_end: 4.0,
                ..base
            },
            Experiment::AppC => Self {
                noise: vec![NOISELESS, NOISY],
                c6_values: vec![5.0, 10.0, 15.0],
                ..base
            },
            Experiment::AppD => Self {
                noise: vec![NOISELESS, noise(1.0, 0.0)],
                scan: Grid::Range {
                    start: 0.8,
                    stop: 1.2,
                    points: 9,
                },
                ..base
            },
            Experiment::AppE => Self {
                noise: vec![NOISELESS, NOISY],
                scan: full_scan,
                ..base
            },
            Experiment::Custom => base,
        }
    }

    /// Overlay a partial JSON object on the defaults of its experiment.
    pub fn from_value(value: Value) -> anyhow::Result<Self> {
        let Value::Object(user) = value else {
            bail!("config must be a JSON object");
        };
        let name = user
            .get("experiment")
            .and_then(Value::as_str)
            .context("config needs an `experiment` name")?;
        let experiment: Experiment = name.parse()?;
        let Value::Object(mut merged) = serde_json::to_value(Self::defaults(experiment))? else {
            unreachable!("config serializes to an object");
        };
        for (k, v) in user {
            merged.insert(k, v);
        }
        let cfg: Self = serde_json::from_value(Value::Object(merged)).context("invalid config")?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Parse a config file, or the `config` field of a run summary.
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
        match value.get("config") {
            Some(inner) if value.get("config_hash").is_some() => Self::from_value(inner.clone()),
            _ => Self::from_value(value),
        }
    }

    pub fn check(&self) -> anyhow::Result<()> {
        if !(self.omega > 0.0 && self.c6 > 0.0) {
            bail!("omega and c6 must be positive");
        }
        if !(self.t_end > 0.0) {
            bail!("t_end must be positive");
        }
        if self.samples < 2 {
            bail!("samples must be at least 2");
        }
        if self.trajectories == 0 {
            bail!("trajectories must be positive");
        }
        if self
            .noise
            .iter()
            .any(|n| !(n.gamma >= 0.0 && n.kappa >= 0.0))
        {
            bail!("noise rates must be non-negative");
        }
        if self.experiment != Experiment::Fig4 && self.noise.is_empty() {
            bail!("at least one noise setting is required");
        }
        if self.experiment.is_scan() && self.scan.values().is_empty() {
            bail!("scan grid is empty");
        }
        if self.experiment == Experiment::Custom && self.device.is_none() {
            bail!("custom runs need a `device`");
        }
        if self.experiment == Experiment::Fig4 && self.instances == 0 {
            bail!("instances must be positive");
        }
        for &t in &self.readout_times {
            if !(0.0..=self.t_end).contains(&t) {
                bail!("readout time {t} outside [0, {}]", self.t_end);
            }
        }
        Ok(())
    }

    pub fn gas_spec(&self) -> GasSwitchSpec {
        self.gas.unwrap_or(match self.gas_preset {
            GasPreset::Full => GasSwitchSpec::full_scale(),
            GasPreset::Desk => GasSwitchSpec::desk_scale(),
        })
    }

    /// SHA-256 of the canonical JSON form, first 16 hex digits.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }
}
