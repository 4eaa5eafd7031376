//! Conversion between physical (SI, angular) and dimensionless units.
//!
//! Physical frequencies are stored as angular frequencies `2π·ν`; the
//! constructors accept the cyclic `ν` values that experiment tables quote.
//! The dimensionless system measures frequencies in units of a reference
//! Rabi frequency and lengths in units of a reference length (normally the
//! facilitation distance), so `C6 -> C6 / (Ω·r^6)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::network::AtomNetwork;
use super::params::SimParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    /// Frequencies in units of Ω, lengths in units of a reference distance.
    #[default]
    Dimensionless,
    /// Angular frequencies in rad/s, lengths in μm.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToDimensionless,
    ToPhysical,
}

impl Direction {
    fn source(self) -> UnitSystem {
        match self {
            Direction::ToDimensionless => UnitSystem::Physical,
            Direction::ToPhysical => UnitSystem::Dimensionless,
        }
    }

    fn target(self) -> UnitSystem {
        match self {
            Direction::ToDimensionless => UnitSystem::Dimensionless,
            Direction::ToPhysical => UnitSystem::Physical,
        }
    }
}

/// `2π·ν`.
pub fn angular(nu: f64) -> f64 {
    TAU * nu
}

/// `ω / 2π`.
pub fn cyclic(omega: f64) -> f64 {
    omega / TAU
}

/// Reference scales of a dimensionless unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScale {
    /// Reference angular frequency (rad/s).
    pub omega: f64,
    /// Reference length (μm); needed to convert geometry and C6.
    pub length: Option<f64>,
}

impl UnitScale {
    /// Scale from a cyclic Rabi frequency in Hz.
    pub fn from_rabi_hz(nu: f64) -> Self {
        Self {
            omega: angular(nu),
            length: None,
        }
    }

    pub fn from_params(params: &SimParams) -> Result<Self> {
        if params.unit_system() != UnitSystem::Physical {
            return Err(Error::Configuration(
                "unit scale needs physical parameters".into(),
            ));
        }
        Ok(Self {
            omega: params.omega(),
            length: None,
        })
    }

    pub fn with_length(self, length: f64) -> Self {
        Self {
            length: Some(length),
            ..self
        }
    }

    fn frequency_factor(&self, dir: Direction) -> f64 {
        match dir {
            Direction::ToDimensionless => 1.0 / self.omega,
            Direction::ToPhysical => self.omega,
        }
    }

    fn length(&self) -> Result<f64> {
        match self.length {
            Some(l) if l > 0.0 => Ok(l),
            Some(l) => Err(Error::Configuration(format!(
                "reference length must be positive, got {l}"
            ))),
            None => Err(Error::Configuration(
                "converting lengths needs a reference length".into(),
            )),
        }
    }

    fn check(&self, from: UnitSystem, dir: Direction) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::Configuration(format!(
                "reference frequency must be positive, got {}",
                self.omega
            )));
        }
        if from != dir.source() {
            return Err(Error::Configuration(format!(
                "value is already in {:?} units",
                dir.target()
            )));
        }
        Ok(())
    }
}

pub trait ConvertUnits: Sized {
    fn convert_units(&self, scale: &UnitScale, dir: Direction) -> Result<Self>;
}

impl ConvertUnits for SimParams {
    fn convert_units(&self, scale: &UnitScale, dir: Direction) -> Result<Self> {
        scale.check(self.unit_system(), dir)?;
        let f = scale.frequency_factor(dir);
        SimParams::with_units(
            self.omega() * f,
            self.gamma() * f,
            self.kappa() * f,
            dir.target(),
        )
    }
}

impl ConvertUnits for AtomNetwork {
    fn convert_units(&self, scale: &UnitScale, dir: Direction) -> Result<Self> {
        scale.check(self.units(), dir)?;
        let f = scale.frequency_factor(dir);
        let l = scale.length()?;
        let (lf, c6f) = match dir {
            Direction::ToDimensionless => (1.0 / l, f / l.powi(6)),
            Direction::ToPhysical => (l, f * l.powi(6)),
        };
        let positions = self
            .positions()
            .iter()
            .map(|p| [p[0] * lf, p[1] * lf, p[2] * lf])
            .collect();
        let detunings = self.static_detunings().iter().map(|d| d * f).collect();
        Ok(AtomNetwork::from_parts_unchecked(
            positions,
            detunings,
            self.c6() * c6f,
            dir.target(),
        ))
    }
}
