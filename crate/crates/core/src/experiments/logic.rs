use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::devices::{
    build_and_gate_with, build_nand_gate_with, find_work_time, gate_inputs, logic_readout,
    truth_table_margin, ChainScale, LogicResult, LOGIC_THRESHOLD,
};
use crate::engine::{run_device, EngineKind, RunSettings};
use crate::error::Result;
use crate::model::SimParams;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    And,
    Nand,
}

impl Gate {
    pub fn expected(self, bits: [bool; 2]) -> bool {
        let and = bits[0] && bits[1];
        match self {
            Gate::And => and,
            Gate::Nand => !and,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicTable {
    pub gate: Gate,
    pub work_time: f64,
    /// Truth-table margin at the work time; positive when every row reads
    /// correctly.
    pub margin: f64,
    /// Rows in input order 00, 01, 10, 11.
    pub rows: Vec<LogicResult>,
    #[serde(skip)]
    pub series: Vec<TimeSeries>,
}

impl LogicTable {
    pub fn output_bits(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.output_bit).collect()
    }

    pub fn is_correct(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.output_bit == self.gate.expected([r.inputs[0], r.inputs[1]]))
    }
}

/// Run all four inputs, pick the work time that maximizes the truth-table
/// margin and read every row out there.
pub fn logic_table(
    gate: Gate,
    scale: ChainScale,
    params: &SimParams,
    engine: EngineKind,
    settings: &RunSettings,
) -> Result<LogicTable> {
    let inputs = gate_inputs();
    let series = inputs
        .par_iter()
        .map(|&bits| {
            let device = match gate {
                Gate::And => build_and_gate_with(scale, bits)?,
                Gate::Nand => build_nand_gate_with(scale, bits)?,
            };
            run_device(&device, params, engine, settings)
        })
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<(bool, &TimeSeries)> = inputs
        .iter()
        .zip(&series)
        .map(|(&b, s)| (gate.expected(b), s))
        .collect();
    let margins = truth_table_margin(&runs, LOGIC_THRESHOLD)?;
    let work_time = find_work_time(&series[0].times, &margins)?;
    let margin = margins
        .iter()
        .zip(&series[0].times)
        .find(|(_, &t)| t == work_time)
        .map(|(&m, _)| m)
        .unwrap_or(f64::NEG_INFINITY);
    let rows = inputs
        .iter()
        .zip(&series)
        .map(|(b, s)| logic_readout(s, b, work_time, LOGIC_THRESHOLD))
        .collect::<Result<_>>()?;
    Ok(LogicTable {
        gate,
        work_time,
        margin,
        rows,
        series,
    })
}
