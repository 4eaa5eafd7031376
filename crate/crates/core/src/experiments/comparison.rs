use serde::{Deserialize, Serialize};

use crate::devices::{transport_chain, ChainScale, DeviceInstance};
use crate::engine::{run_device, run_kmc_on_grid, EngineKind, RunSettings};
use crate::error::{Error, Result};
use crate::model::SimParams;
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineComparison {
    pub gamma: f64,
    /// Largest per-site density difference over the compared window.
    pub max_difference: f64,
    pub quantum: TimeSeries,
    pub classical: TimeSeries,
}

/// Quantum and classical-exact runs of an `n`-atom transport chain,
/// compared per site over `[0, t_max]`.
pub fn quantum_vs_classical(
    n: usize,
    scale: ChainScale,
    params: &SimParams,
    t_max: f64,
    settings: &RunSettings,
) -> Result<EngineComparison> {
    let device = transport_chain(n, scale)?;
    let quantum = run_device(&device, params, EngineKind::Quantum, settings)?;
    let classical = run_device(&device, params, EngineKind::ClassicalExact, settings)?;
    Ok(EngineComparison {
        gamma: params.gamma(),
        max_difference: quantum.max_site_difference(&classical, t_max)?,
        quantum,
        classical,
    })
}

/// Transport chain of `n` atoms on one engine.
pub fn transport(
    n: usize,
    scale: ChainScale,
    params: &SimParams,
    engine: EngineKind,
    settings: &RunSettings,
) -> Result<TimeSeries> {
    run_device(&transport_chain(n, scale)?, params, engine, settings)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossEngine {
    pub device: String,
    /// Largest per-site difference between sampler and propagator.
    pub max_difference: f64,
    /// Largest difference in units of the sampler's standard error, over
    /// entries with nonzero error.
    pub max_z: f64,
    pub exact: TimeSeries,
    pub sampled: TimeSeries,
}

/// Gillespie ensemble against the exact probability propagator on the same
/// device and grid.
pub fn cross_engine(
    device: &DeviceInstance,
    params: &SimParams,
    settings: &RunSettings,
) -> Result<CrossEngine> {
    let exact = run_device(device, params, EngineKind::ClassicalExact, settings)?;
    // Sample at the propagator's step times so both series share a grid.
    let sampled = run_kmc_on_grid(
        device,
        params,
        settings,
        &exact.times,
        &device.observables(),
    )?;
    if exact.len() != sampled.len() {
        return Err(Error::Shape {
            expected: exact.len(),
            got: sampled.len(),
        });
    }
    let errors = sampled.site_stderr.as_ref();
    let (mut max_difference, mut max_z) = (0.0f64, 0.0f64);
    for (s, col) in exact.site_values.iter().enumerate() {
        for (i, (a, b)) in col.iter().zip(&sampled.site_values[s]).enumerate() {
            let d = (a - b).abs();
            max_difference = max_difference.max(d);
            if let Some(e) = errors.map(|e| e[s][i]).filter(|&e| e > 0.0) {
                max_z = max_z.max(d / e);
            }
        }
    }
    Ok(CrossEngine {
        device: device.name.clone(),
        max_difference,
        max_z,
        exact,
        sampled,
    })
}
