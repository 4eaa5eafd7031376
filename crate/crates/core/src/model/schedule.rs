use serde::{Deserialize, Serialize};

use super::network::AtomNetwork;
use crate::error::{domain, Result};

/// One piecewise-constant override, active on `[t_start, t_end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetuningOverride {
    pub t_start: f64,
    pub t_end: f64,
    pub atom: usize,
    pub detuning: f64,
}

/// Time-dependent detuning overrides on top of the static detunings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<DetuningOverride>", into = "Vec<DetuningOverride>")]
pub struct DetuningSchedule {
    overrides: Vec<DetuningOverride>,
}

impl DetuningSchedule {
    pub fn new(mut overrides: Vec<DetuningOverride>) -> Result<Self> {
        for o in &overrides {
            if !(o.t_start < o.t_end) || !o.t_start.is_finite() || !o.t_end.is_finite() {
                return Err(domain(format!(
                    "override window [{}, {}) is empty",
                    o.t_start, o.t_end
                )));
            }
            if !o.detuning.is_finite() {
                return Err(domain("override detuning must be finite"));
            }
        }
        overrides.sort_by(|a, b| a.atom.cmp(&b.atom).then(a.t_start.total_cmp(&b.t_start)));
        for w in overrides.windows(2) {
            if w[0].atom == w[1].atom && w[1].t_start < w[0].t_end {
                return Err(domain(format!(
                    "overlapping overrides for atom {}",
                    w[0].atom
                )));
            }
        }
        Ok(Self { overrides })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.overrides.is_empty()
    }

    pub fn overrides(&self) -> &[DetuningOverride] {
        &self.overrides
    }

    /// Largest atom index referenced, if any.
    pub fn max_atom(&self) -> Option<usize> {
        self.overrides.iter().map(|o| o.atom).max()
    }

    pub fn validate_for(&self, network: &AtomNetwork) -> Result<()> {
        match self.max_atom() {
            Some(a) if a >= network.len() => Err(domain(format!(
                "schedule overrides atom {a} but network has {} atoms",
                network.len()
            ))),
            _ => Ok(()),
        }
    }

    /// Per-atom detunings in effect at time `t`.
    pub fn snapshot(&self, network: &AtomNetwork, t: f64) -> Vec<f64> {
        let mut d = network.static_detunings().to_vec();
        for o in &self.overrides {
            if o.t_start <= t && t < o.t_end {
                d[o.atom] = o.detuning;
            }
        }
        d
    }

    /// Sorted, deduplicated instants at which some detuning changes.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .overrides
            .iter()
            .flat_map(|o| [o.t_start, o.t_end])
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// First breakpoint strictly after `t`.
    pub fn next_breakpoint(&self, t: f64) -> Option<f64> {
        self.overrides
            .iter()
            .flat_map(|o| [o.t_start, o.t_end])
            .filter(|&b| b > t)
            .min_by(f64::total_cmp)
    }

    /// Atoms whose detuning changes at breakpoint `t`.
    pub fn atoms_changing_at(&self, t: f64) -> impl Iterator<Item = usize> + '_ {
        self.overrides
            .iter()
            .filter(move |o| o.t_start == t || o.t_end == t)
            .map(|o| o.atom)
    }
}

impl TryFrom<Vec<DetuningOverride>> for DetuningSchedule {
    type Error = crate::error::Error;

    fn try_from(v: Vec<DetuningOverride>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DetuningSchedule> for Vec<DetuningOverride> {
    fn from(s: DetuningSchedule) -> Self {
        s.overrides
    }
}
