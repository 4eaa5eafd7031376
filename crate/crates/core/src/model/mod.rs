//! Shared physical model: atoms, drive and noise parameters, detuning
//! schedules, basis configurations and the facilitation/blockade formulas.

mod configuration;
mod formulas;
pub(crate) mod network;
mod params;
mod schedule;
mod units;

pub use configuration::Configuration;
pub use formulas::{
    blockade_radius, blockade_radius_report, facilitation_detuning, facilitation_radius,
    local_mismatch, local_mismatch_with, BlockadeRadii,
};
pub use network::{AtomNetwork, Position};
pub use params::SimParams;
pub use schedule::{DetuningOverride, DetuningSchedule};
pub use units::{angular, cyclic, ConvertUnits, Direction, UnitScale, UnitSystem};
