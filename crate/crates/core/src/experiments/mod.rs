//! Parameter scans, truth tables, engine comparisons and the self-check
//! report.

mod comparison;
mod diode;
mod gas;
mod logic;
mod switch;
mod validate;

pub use comparison::{
    cross_engine, quantum_vs_classical, transport, CrossEngine, EngineComparison,
};
pub use diode::{diode_scan, diode_sweep, DiodePoint};
pub use gas::{gas_switch, GasSwitchResult, GAS_T_END};
pub use logic::{logic_table, Gate, LogicTable};
pub use switch::{switch_scan, ScanPoint, SwitchScan};
pub use validate::{validate, Check, CheckStatus, ValidateOptions};

use crate::series::TimeSeries;

/// Whether the conservation figures a dense engine recorded meet its
/// bounds; sampled series carry none and pass trivially.
pub fn conservation_ok(series: &TimeSeries) -> bool {
    match (&series.meta.conservation, series.meta.engine.as_str()) {
        (Some(c), "quantum") => c.quantum_ok(),
        (Some(c), _) => c.classical_ok(),
        (None, _) => true,
    }
}

/// Chain-device default end time, in units of 1/Ω.
pub const CHAIN_T_END: f64 = 8.0;
