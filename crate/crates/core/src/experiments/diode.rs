use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::devices::{build_diode_with, ChainScale, DiodeDirection};
use crate::engine::{run_device, EngineKind, RunSettings};
use crate::error::{Error, Result};
use crate::model::SimParams;
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiodePoint {
    /// `Δ_g / Δ_f`.
    pub ratio: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub t_read: f64,
    pub forward: f64,
    pub reverse: f64,
    #[serde(skip)]
    pub series: Option<(TimeSeries, TimeSeries)>,
}

impl DiodePoint {
    pub fn gap(&self) -> f64 {
        self.forward - self.reverse
    }
}

fn run_point(
    scale: ChainScale,
    ratio: f64,
    params: &SimParams,
    engine: EngineKind,
    t_read: f64,
    settings: &RunSettings,
) -> Result<DiodePoint> {
    let delta_g = ratio * scale.delta_f();
    let f = build_diode_with(scale, DiodeDirection::Forward, delta_g)?;
    let r = build_diode_with(scale, DiodeDirection::Reverse, delta_g)?;
    let f = run_device(&f, params, engine, settings)?;
    let r = run_device(&r, params, engine, settings)?;
    Ok(DiodePoint {
        ratio,
        gamma: params.gamma(),
        kappa: params.kappa(),
        t_read,
        forward: f.output_at(t_read)?,
        reverse: r.output_at(t_read)?,
        series: Some((f, r)),
    })
}

/// Forward and reverse `N_o(t_read)` at one gate ratio for each
/// `(γ, κ)` pair.
pub fn diode_sweep(
    scale: ChainScale,
    ratio: f64,
    noise: &[(f64, f64)],
    omega: f64,
    engine: EngineKind,
    t_read: f64,
    settings: &RunSettings,
) -> Result<Vec<DiodePoint>> {
    if noise.is_empty() {
        return Err(Error::Empty("dephasing grid"));
    }
    noise
        .par_iter()
        .map(|&(gamma, kappa)| {
            let params = SimParams::new(omega, gamma, kappa)?;
            run_point(scale, ratio, &params, engine, t_read, settings)
        })
        .collect()
}

/// Forward and reverse `N_o(t_read)` over a grid of gate ratios.
pub fn diode_scan(
    scale: ChainScale,
    params: &SimParams,
    engine: EngineKind,
    ratios: &[f64],
    t_read: f64,
    settings: &RunSettings,
) -> Result<Vec<DiodePoint>> {
    if ratios.is_empty() {
        return Err(Error::Empty("scan grid"));
    }
    ratios
        .par_iter()
        .map(|&r| run_point(scale, r, params, engine, t_read, settings))
        .collect()
}
