use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::devices::{build_switch_chain_with, ChainScale};
use crate::engine::{run_device, EngineKind, RunSettings};
use crate::error::{Error, Result};
use crate::model::SimParams;
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    /// Scan coordinate, `Δ_g / Δ_f` for the switch and diode.
    pub value: f64,
    /// `N_o` at each requested readout time.
    pub n_o: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchScan {
    pub readout_times: Vec<f64>,
    pub points: Vec<ScanPoint>,
    #[serde(skip)]
    pub series: Vec<TimeSeries>,
}

impl SwitchScan {
    /// Scan value with the largest `N_o` at the first readout time.
    pub fn peak(&self) -> Option<&ScanPoint> {
        self.points
            .iter()
            .max_by(|a, b| a.n_o[0].total_cmp(&b.n_o[0]))
    }

    /// `N_o` at the first readout time of the scan point closest to `value`.
    pub fn value_near(&self, value: f64) -> Option<f64> {
        self.points
            .iter()
            .min_by(|a, b| (a.value - value).abs().total_cmp(&(b.value - value).abs()))
            .map(|p| p.n_o[0])
    }
}

/// Switch chain evaluated at each `Δ_g/Δ_f` in `ratios`, in parallel.
pub fn switch_scan(
    scale: ChainScale,
    outputs: usize,
    params: &SimParams,
    engine: EngineKind,
    ratios: &[f64],
    readout_times: &[f64],
    settings: &RunSettings,
) -> Result<SwitchScan> {
    if ratios.is_empty() {
        return Err(Error::Empty("scan grid"));
    }
    let series = ratios
        .par_iter()
        .map(|&r| {
            let device = build_switch_chain_with(scale, r * scale.delta_f(), outputs)?;
            run_device(&device, params, engine, settings)
        })
        .collect::<Result<Vec<_>>>()?;
    let points = ratios
        .iter()
        .zip(&series)
        .map(|(&value, s)| {
            let n_o = readout_times
                .iter()
                .map(|&t| s.output_at(t))
                .collect::<Result<_>>()?;
            Ok(ScanPoint { value, n_o })
        })
        .collect::<Result<_>>()?;
    Ok(SwitchScan {
        readout_times: readout_times.to_vec(),
        points,
        series,
    })
}
