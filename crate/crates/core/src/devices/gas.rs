use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::DeviceInstance;
use crate::engine::EngineKind;
use crate::error::Result;
use crate::geometry::{
    assign_regions, sample_cylinder_instance, CylinderSpec, Region, RegionPartition,
};
use crate::model::{
    angular, AtomNetwork, Configuration, ConvertUnits, DetuningSchedule, Direction, SimParams,
    UnitScale, UnitSystem,
};

/// Laboratory parameters of the cylindrical-gas switch. Lengths in μm,
/// frequencies as cyclic values in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasSwitchSpec {
    pub cylinder: CylinderSpec,
    /// Input, gate and output lengths along the axis.
    pub regions: [f64; 3],
    pub c6_hz: f64,
    pub omega_hz: f64,
    pub gamma_hz: f64,
    pub kappa_hz: f64,
    pub delta_f_hz: f64,
}

impl GasSwitchSpec {
    /// 3000 atoms in a 30 μm × 7 μm cylinder split 5/10/15 μm.
    pub fn full_scale() -> Self {
        Self {
            cylinder: CylinderSpec {
                length: 30.0,
                radius: 7.0,
                count: 3000,
                d_min: 0.1,
            },
            regions: [5.0, 10.0, 15.0],
            c6_hz: 869e9,
            omega_hz: 50e3,
            gamma_hz: 700e3,
            kappa_hz: 2e3,
            delta_f_hz: -69.5e6,
        }
    }

    /// `count` atoms at number density `density` (μm⁻³), keeping the axial
    /// layout and narrowing the cylinder.
    pub fn at_density(count: usize, density: f64) -> Self {
        let mut spec = Self::full_scale();
        spec.cylinder.count = count;
        spec.cylinder.radius = (count as f64 / (density * PI * spec.cylinder.length)).sqrt();
        spec
    }

    /// 500 atoms at 2.3·10¹² cm⁻³ = 2.3 μm⁻³.
    pub fn desk_scale() -> Self {
        Self::at_density(500, 2.3)
    }

    pub fn with_count(self, count: usize) -> Self {
        let mut s = self;
        s.cylinder.count = count;
        s
    }

    /// Facilitation radius `(-C6/Δ_f)^{1/6}` in μm.
    pub fn r_f(&self) -> f64 {
        (-self.c6_hz / self.delta_f_hz).powf(1.0 / 6.0)
    }

    pub fn scale(&self) -> UnitScale {
        UnitScale::from_rabi_hz(self.omega_hz).with_length(self.r_f())
    }

    /// Rates in units of Ω (γ = 14, κ = 0.04 by default).
    pub fn params(&self) -> Result<SimParams> {
        SimParams::physical_hz(self.omega_hz, self.gamma_hz, self.kappa_hz)?
            .convert_units(&self.scale(), Direction::ToDimensionless)
    }

    pub fn partition(&self, on: bool) -> Result<RegionPartition> {
        let df = angular(self.delta_f_hz);
        let gate = if on { df } else { -df };
        RegionPartition::new(self.regions, [0.0, gate, df])
    }
}

/// Cylinder sample with input at Δ = 0, gate at ±Δ_f (on/off) and output at
/// Δ_f, all atoms in the ground state, converted to units of Ω and r_f.
pub fn build_gas_switch(
    spec: &GasSwitchSpec,
    on: bool,
    seed: u64,
    instance: u32,
) -> Result<DeviceInstance> {
    let partition = spec.partition(on)?;
    if !partition.gate_blocks(spec.r_f()) {
        log::warn!(
            "gate length {} μm does not exceed r_f = {:.2} μm; input can reach the output directly",
            spec.regions[1],
            spec.r_f()
        );
    }
    let positions = sample_cylinder_instance(&spec.cylinder, seed, instance)?;
    let detunings = assign_regions(&positions, &partition)?;
    let output_sites = positions
        .iter()
        .enumerate()
        .filter(|(_, p)| partition.region_of(p[0]) == Ok(Region::Output))
        .map(|(i, _)| i)
        .collect();
    let n = positions.len();
    let lab = AtomNetwork::with_units(
        positions,
        detunings,
        angular(spec.c6_hz),
        UnitSystem::Physical,
    )?;
    let network = lab.convert_units(&spec.scale(), Direction::ToDimensionless)?;
    Ok(DeviceInstance {
        name: if on {
            "gas-on".into()
        } else {
            "gas-off".into()
        },
        network,
        schedule: DetuningSchedule::empty(),
        initial: Configuration::ground(n),
        output_sites,
        engine_hint: EngineKind::Kmc,
        work_time: None,
        step_dt: None,
    })
}
