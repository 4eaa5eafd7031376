use serde::{Deserialize, Serialize};

use super::units::{angular, UnitSystem};
use crate::error::{domain, Error, Result};

/// Drive and noise rates: Rabi frequency Ω, dephasing γ and decay κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SimParams {
    omega: f64,
    gamma: f64,
    kappa: f64,
    #[serde(default)]
    unit_system: UnitSystem,
}

#[derive(Deserialize)]
struct RawParams {
    omega: f64,
    gamma: f64,
    kappa: f64,
    #[serde(default)]
    unit_system: UnitSystem,
}

impl TryFrom<RawParams> for SimParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        Self::with_units(r.omega, r.gamma, r.kappa, r.unit_system)
    }
}

impl SimParams {
    pub fn with_units(omega: f64, gamma: f64, kappa: f64, unit_system: UnitSystem) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(domain(format!(
                "Rabi frequency must be positive, got {omega}"
            )));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(domain(format!(
                "dephasing rate must be non-negative, got {gamma}"
            )));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(domain(format!(
                "decay rate must be non-negative, got {kappa}"
            )));
        }
        Ok(Self {
            omega,
            gamma,
            kappa,
            unit_system,
        })
    }

    /// Dimensionless rates with an explicit Rabi frequency.
    pub fn new(omega: f64, gamma: f64, kappa: f64) -> Result<Self> {
        Self::with_units(omega, gamma, kappa, UnitSystem::Dimensionless)
    }

    /// Dimensionless rates in units of Ω = 1.
    pub fn dimensionless(gamma: f64, kappa: f64) -> Result<Self> {
        Self::new(1.0, gamma, kappa)
    }

    /// Physical rates from cyclic frequencies `ν = ω/2π` in Hz.
    pub fn physical_hz(omega: f64, gamma: f64, kappa: f64) -> Result<Self> {
        Self::with_units(
            angular(omega),
            angular(gamma),
            angular(kappa),
            UnitSystem::Physical,
        )
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn unit_system(&self) -> UnitSystem {
        self.unit_system
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::with_units(self.omega, gamma, self.kappa, self.unit_system)
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self::with_units(self.omega, self.gamma, kappa, self.unit_system)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_rates() {
        assert!(SimParams::new(0.0, 1.0, 0.0).is_err());
        assert!(SimParams::new(1.0, -1.0, 0.0).is_err());
        assert!(SimParams::new(1.0, 0.0, f64::NAN).is_err());
        assert!(SimParams::new(1.0, 0.0, 0.0).is_ok());
    }
}
