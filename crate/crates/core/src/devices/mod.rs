//! Atomtronic devices as ready-to-run network instances.

mod chains;
mod gas;
mod gates;
mod readout;

use serde::{Deserialize, Serialize};

use crate::engine::EngineKind;
use crate::error::{domain, Result};
use crate::model::{AtomNetwork, Configuration, DetuningSchedule};
use crate::series::Observables;

pub use chains::{
    build_diode, build_diode_with, build_switch_chain, build_switch_chain_with, chain_work_time,
    diode_gaps, gate_radius, transport_chain, ChainScale, DiodeDirection, SWITCH_WORK_TIME,
    SWITCH_WORK_TIME_COHERENT,
};
pub use gas::{build_gas_switch, GasSwitchSpec};
pub use gates::{
    and_gate_positions, build_and_gate, build_and_gate_with, build_nand_gate, build_nand_gate_with,
    gate_inputs, nand_window, NAND_PULSE_CENTER,
};
pub use readout::{
    find_work_time, logic_readout, truth_table_margin, LogicResult, LOGIC_THRESHOLD,
};

/// Everything an engine needs to run one device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceInstance {
    pub name: String,
    pub network: AtomNetwork,
    pub schedule: DetuningSchedule,
    pub initial: Configuration,
    pub output_sites: Vec<usize>,
    /// Engine the device is normally run with; any engine is allowed.
    pub engine_hint: EngineKind,
    /// Readout time, when the device has a fixed one.
    pub work_time: Option<f64>,
    /// Integration step that puts every schedule breakpoint on the grid.
    pub step_dt: Option<f64>,
}

impl DeviceInstance {
    pub fn validate(&self) -> Result<()> {
        let n = self.network.len();
        if self.initial.len() != n {
            return Err(domain(format!(
                "initial configuration has {} atoms, network {n}",
                self.initial.len()
            )));
        }
        if self.output_sites.is_empty() {
            return Err(domain("device needs at least one output site"));
        }
        for &s in &self.output_sites {
            if s >= n {
                return Err(domain(format!("output site {s} out of range")));
            }
            if self.initial.is_excited(s) {
                return Err(domain(format!("output site {s} starts excited")));
            }
        }
        self.schedule.validate_for(&self.network)
    }

    /// All site densities for small devices, only `N_o` for large ones.
    pub fn observables(&self) -> Observables {
        if self.network.len() <= 16 {
            Observables::all_sites(self.network.len(), self.output_sites.clone())
        } else {
            Observables::output_only(self.output_sites.clone())
        }
    }
}
