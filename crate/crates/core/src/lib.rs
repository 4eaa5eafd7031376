//! Simulation of driven-dissipative Rydberg atom networks.
//!
//! Two engines share one physical model ([`model`]):
//!
//! * [`quantum`] integrates the Lindblad master equation for the full
//!   density matrix (up to about 8 atoms in practice);
//! * [`classical`] propagates the strong-dephasing rate equation, either as
//!   an exact probability vector or by Gillespie sampling of trajectories.
//!
//! [`geometry`] and [`devices`] build the atomtronic switches, diode and
//! logic gates; [`experiments`] runs scans, truth tables and engine
//! comparisons on top.

pub mod classical;
pub mod devices;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod model;
mod ode;
pub mod quantum;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub use model::{AtomNetwork, Configuration, DetuningSchedule, SimParams};
pub use ode::StepOptions;
pub use series::{Observables, TimeSeries};
