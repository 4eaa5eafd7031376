use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::series::TimeSeries;

pub const LOGIC_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicResult {
    pub inputs: Vec<bool>,
    pub n_o_at_work_time: f64,
    pub output_bit: bool,
    pub threshold: f64,
}

/// Output bit at `t_w`: 1 iff `N_o(t_w)` (linearly interpolated) exceeds the
/// threshold.
pub fn logic_readout(
    series: &TimeSeries,
    inputs: &[bool],
    t_w: f64,
    threshold: f64,
) -> Result<LogicResult> {
    let n_o = series.output_at(t_w)?;
    Ok(LogicResult {
        inputs: inputs.to_vec(),
        n_o_at_work_time: n_o,
        output_bit: n_o > threshold,
        threshold,
    })
}

/// Time of the largest criterion value; ties go to the earliest time.
pub fn find_work_time(times: &[f64], criterion: &[f64]) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::Empty("work-time series"));
    }
    if times.len() != criterion.len() {
        return Err(Error::Shape {
            expected: times.len(),
            got: criterion.len(),
        });
    }
    let mut best = 0;
    for (i, &c) in criterion.iter().enumerate() {
        if c > criterion[best] {
            best = i;
        }
    }
    Ok(times[best])
}

/// Worst-case distance from the threshold, on the correct side, over a set
/// of runs with expected output bits; positive where every run reads
/// correctly.
pub fn truth_table_margin(runs: &[(bool, &TimeSeries)], threshold: f64) -> Result<Vec<f64>> {
    let (_, first) = runs.first().ok_or(Error::Empty("truth table"))?;
    let mut margin = vec![f64::INFINITY; first.len()];
    for (expected, s) in runs {
        if s.times != first.times {
            return Err(domain("truth-table runs must share a time grid"));
        }
        for (m, &n_o) in margin.iter_mut().zip(&s.output) {
            let d = if *expected {
                n_o - threshold
            } else {
                threshold - n_o
            };
            *m = m.min(d);
        }
    }
    Ok(margin)
}
