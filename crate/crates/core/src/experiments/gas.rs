use serde::{Deserialize, Serialize};

use crate::classical::{run_kmc_ensemble, EnsembleAccumulator, KmcSystem, NeighborTable};
use crate::devices::{build_gas_switch, GasSwitchSpec};
use crate::engine::RunSettings;
use crate::error::{Error, Result};
use crate::series::{uniform_grid, TimeSeries};

/// Default gas evolution time in units of 1/Ω; the on-state output has
/// saturated well before it.
pub const GAS_T_END: f64 = 80.0;

/// Fraction of the run averaged for the plateau readout.
const PLATEAU_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GasSwitchResult {
    pub instances: u32,
    pub trajectories: usize,
    pub plateau_fraction: f64,
    pub plateau_on: f64,
    pub plateau_off: f64,
    pub ratio: f64,
    pub on: TimeSeries,
    pub off: TimeSeries,
}

/// On and off switch sampled over `instances` position draws with
/// `settings.trajectories` trajectories each, pooled per state.
///
/// Both states use the same positions and random streams per instance.
pub fn gas_switch(
    spec: &GasSwitchSpec,
    instances: u32,
    settings: &RunSettings,
) -> Result<GasSwitchResult> {
    if instances == 0 {
        return Err(Error::Empty("position instances"));
    }
    let params = spec.params()?;
    let grid = uniform_grid(settings.t_end, settings.samples)?;
    let mut pooled = Vec::with_capacity(2);
    for on in [true, false] {
        let mut total: Option<EnsembleAccumulator> = None;
        for instance in 0..instances {
            let device = build_gas_switch(spec, on, settings.seed, instance)?;
            let table = NeighborTable::build(&device.network, settings.floor(&params))?;
            let system = KmcSystem::new(&device.network, &table, params, &device.schedule)?;
            let acc = run_kmc_ensemble(
                &system,
                &device.initial,
                settings.t_end,
                &grid,
                &device.observables(),
                settings.seed,
                u64::from(instance),
                settings.trajectories,
            )?;
            match &mut total {
                None => total = Some(acc),
                Some(t) => t.pool(&acc)?,
            }
        }
        let mut series = total.expect("instances > 0").finish()?;
        series.meta.engine = "kmc".into();
        series.meta.seed = Some(settings.seed);
        pooled.push(series);
    }
    let off = pooled.pop().expect("two states");
    let on = pooled.pop().expect("two states");
    let plateau_on = on.plateau(PLATEAU_FRACTION)?;
    let plateau_off = off.plateau(PLATEAU_FRACTION)?;
    Ok(GasSwitchResult {
        instances,
        trajectories: settings.trajectories,
        plateau_fraction: PLATEAU_FRACTION,
        plateau_on,
        plateau_off,
        ratio: plateau_on / plateau_off,
        on,
        off,
    })
}
