use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Input,
    Gate,
    Output,
}

/// Split of `[0, L_x]` into input, gate and output segments along x, each
/// with its own detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPartition {
    pub lengths: [f64; 3],
    pub detunings: [f64; 3],
}

impl RegionPartition {
    pub fn new(lengths: [f64; 3], detunings: [f64; 3]) -> Result<Self> {
        if lengths.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(domain(format!(
                "region lengths must be positive, got {lengths:?}"
            )));
        }
        if detunings.iter().any(|d| !d.is_finite()) {
            return Err(domain("region detunings must be finite"));
        }
        Ok(Self { lengths, detunings })
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Interior cut points `[L_i, L_i + L_g]`.
    pub fn cuts(&self) -> [f64; 2] {
        [self.lengths[0], self.lengths[0] + self.lengths[1]]
    }

    /// Whether the gate is wider than the facilitation radius, so that a
    /// detuned gate cannot be bridged by a single facilitated hop.
    pub fn gate_blocks(&self, r_f: f64) -> bool {
        self.lengths[1] > r_f
    }

    /// Region of coordinate `x`; a point on a cut belongs to the region on
    /// its right.
    pub fn region_of(&self, x: f64) -> Result<Region> {
        if !(0.0..=self.total_length()).contains(&x) {
            return Err(domain(format!(
                "x = {x} outside [0, {}]",
                self.total_length()
            )));
        }
        let [a, b] = self.cuts();
        Ok(if x < a {
            Region::Input
        } else if x < b {
            Region::Gate
        } else {
            Region::Output
        })
    }

    pub fn detuning(&self, region: Region) -> f64 {
        self.detunings[region as usize]
    }
}

/// Per-atom detunings from the region containing each atom's x coordinate.
pub fn assign_regions(positions: &[Position], partition: &RegionPartition) -> Result<Vec<f64>> {
    positions
        .iter()
        .map(|p| partition.region_of(p[0]).map(|r| partition.detuning(r)))
        .collect()
}
