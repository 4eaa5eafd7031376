//! Uniform entry point over the three engines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::{
    evolve_classical_exact, run_kmc_ensemble, KmcSystem, NeighborTable, ProbabilityVector,
};
use crate::devices::DeviceInstance;
use crate::error::{domain, Error, Result};
use crate::model::SimParams;
use crate::ode::StepOptions;
use crate::quantum::{evolve_quantum, DensityMatrix};
use crate::series::{uniform_grid, Observables, TimeSeries, DEFAULT_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Quantum,
    ClassicalExact,
    Kmc,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [Self::Quantum, Self::ClassicalExact, Self::Kmc];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Quantum => "quantum",
            Self::ClassicalExact => "classical-exact",
            Self::Kmc => "kmc",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| domain(format!("unknown engine `{s}`")))
    }
}

/// Run controls shared by all engines; fields an engine does not use are
/// ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub t_end: f64,
    pub samples: usize,
    /// Integration step for the dense engines; `None` uses the device's
    /// preferred step or the default `0.005/Ω`.
    pub dt: Option<f64>,
    /// Skip the step-size cap.
    #[serde(default)]
    pub unchecked_dt: bool,
    pub trajectories: usize,
    pub seed: u64,
    /// Position instance, used to separate the random streams of different
    /// gas samples.
    #[serde(default)]
    pub instance: u32,
    /// Pair energies below this are dropped by the sampler; `None` uses
    /// `1e-3 · min(Ω, γ)`.
    pub interaction_floor: Option<f64>,
}

impl RunSettings {
    pub fn new(t_end: f64) -> Self {
        Self {
            t_end,
            samples: DEFAULT_SAMPLES,
            dt: None,
            unchecked_dt: false,
            trajectories: 10_000,
            seed: 0,
            instance: 0,
            interaction_floor: None,
        }
    }

    pub fn with_trajectories(self, trajectories: usize) -> Self {
        Self {
            trajectories,
            ..self
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn step_options(&self, device: &DeviceInstance, params: &SimParams) -> StepOptions {
        let base = StepOptions::for_omega(params.omega()).with_samples(self.samples);
        let opts = match self.dt.or(device.step_dt) {
            Some(dt) => base.with_dt(dt),
            None => base,
        };
        if self.unchecked_dt {
            opts.unchecked()
        } else {
            opts
        }
    }

    pub fn floor(&self, params: &SimParams) -> f64 {
        self.interaction_floor
            .unwrap_or(1e-3 * params.omega().min(params.gamma()))
    }
}

/// Evolve a device from its initial configuration with the chosen engine.
pub fn run_device(
    device: &DeviceInstance,
    params: &SimParams,
    engine: EngineKind,
    settings: &RunSettings,
) -> Result<TimeSeries> {
    run_device_observing(device, params, engine, settings, &device.observables())
}

pub fn run_device_observing(
    device: &DeviceInstance,
    params: &SimParams,
    engine: EngineKind,
    settings: &RunSettings,
    observables: &Observables,
) -> Result<TimeSeries> {
    device.validate()?;
    if device.network.units() != params.unit_system() {
        return Err(Error::Configuration(
            "network and parameters use different unit systems".into(),
        ));
    }
    let t_end = settings.t_end;
    match engine {
        EngineKind::Quantum => {
            let rho0 = DensityMatrix::from_configuration(&device.initial)?;
            evolve_quantum(
                &device.network,
                &device.schedule,
                params,
                &rho0,
                t_end,
                &settings.step_options(device, params),
                observables,
            )
        }
        EngineKind::ClassicalExact => {
            let p0 = ProbabilityVector::from_configuration(&device.initial)?;
            evolve_classical_exact(
                &device.network,
                &device.schedule,
                params,
                &p0,
                t_end,
                &settings.step_options(device, params),
                observables,
            )
        }
        EngineKind::Kmc => {
            let grid = uniform_grid(t_end, settings.samples)?;
            run_kmc_on_grid(device, params, settings, &grid, observables)
        }
    }
}

/// Gillespie ensemble recorded at arbitrary increasing times within
/// `[0, settings.t_end]`.
pub fn run_kmc_on_grid(
    device: &DeviceInstance,
    params: &SimParams,
    settings: &RunSettings,
    grid: &[f64],
    observables: &Observables,
) -> Result<TimeSeries> {
    device.validate()?;
    let table = NeighborTable::build(&device.network, settings.floor(params))?;
    let system = KmcSystem::new(&device.network, &table, *params, &device.schedule)?;
    let acc = run_kmc_ensemble(
        &system,
        &device.initial,
        settings.t_end,
        grid,
        observables,
        settings.seed,
        u64::from(settings.instance),
        settings.trajectories,
    )?;
    let mut series = acc.finish()?;
    series.meta.seed = Some(settings.seed);
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in EngineKind::ALL {
            assert_eq!(e.as_str().parse::<EngineKind>().unwrap(), e);
            let json = serde_json::to_string(&e).unwrap();
            assert_eq!(json, format!("\"{e}\""));
        }
        assert!("lindblad".parse::<EngineKind>().is_err());
    }
}
