use std::collections::HashMap;
use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::Position;
use crate::rng::stream_rng;

/// Random sequential adsorption of hard spheres jams at this volume
/// fraction; rejection sampling cannot get past it.
pub const RSA_JAMMING_FRACTION: f64 = 0.3841;

/// Fraction above which sampling is flagged as slow.
const CROWDED_FRACTION: f64 = 0.3;

/// Random streams for geometry live in the upper half of the stream space,
/// away from trajectory streams.
const GEOMETRY_STREAM: u64 = 1 << 63;

/// Cylinder with axis along x, spanning `x ∈ [0, length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub length: f64,
    pub radius: f64,
    pub count: usize,
    pub d_min: f64,
}

impl CylinderSpec {
    pub fn new(length: f64, radius: f64, count: usize, d_min: f64) -> Result<Self> {
        let spec = Self {
            length,
            radius,
            count,
            d_min,
        };
        spec.check()?;
        if spec.volume_fraction() >= CROWDED_FRACTION {
            log::warn!(
                "cylinder packing fraction {:.3} is high; sampling may be slow or fail",
                spec.volume_fraction()
            );
        }
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [("length", self.length), ("radius", self.radius)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("cylinder {name} must be positive, got {v}")));
            }
        }
        if !(self.d_min >= 0.0 && self.d_min.is_finite()) {
            return Err(domain(format!(
                "d_min must be non-negative, got {}",
                self.d_min
            )));
        }
        if self.count == 0 {
            return Err(domain("cylinder needs at least one atom"));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * self.length
    }

    /// Volume of the exclusion spheres (diameter `d_min`) over the cylinder
    /// volume.
    pub fn volume_fraction(&self) -> f64 {
        let r = self.d_min / 2.0;
        self.count as f64 * 4.0 / 3.0 * PI * r * r * r / self.volume()
    }

    /// Number density, atoms per unit volume.
    pub fn density(&self) -> f64 {
        self.count as f64 / self.volume()
    }
}

/// Uniform positions with all pairwise distances at least `d_min`.
pub fn sample_cylinder(spec: &CylinderSpec, seed: u64) -> Result<Vec<Position>> {
    sample_cylinder_instance(spec, seed, 0)
}

/// As [`sample_cylinder`], for position instance `instance` of a seed.
pub fn sample_cylinder_instance(
    spec: &CylinderSpec,
    seed: u64,
    instance: u32,
) -> Result<Vec<Position>> {
    spec.check()?;
    if spec.volume_fraction() > RSA_JAMMING_FRACTION {
        return Err(Error::Packing(format!(
            "{} atoms with d_min {} fill {:.3} of the cylinder, beyond the jamming limit {}",
            spec.count,
            spec.d_min,
            spec.volume_fraction(),
            RSA_JAMMING_FRACTION
        )));
    }
    let mut rng = stream_rng(seed, GEOMETRY_STREAM | u64::from(instance));
    let max_attempts = 1000usize.saturating_mul(spec.count);
    let mut grid = HashGrid::new(spec.d_min);
    let mut positions = Vec::with_capacity(spec.count);
    let mut rejections = 0usize;
    while positions.len() < spec.count {
        let x = rng.random::<f64>() * spec.length;
        let rho = spec.radius * rng.random::<f64>().sqrt();
        let phi = 2.0 * PI * rng.random::<f64>();
        let p = [x, rho * phi.cos(), rho * phi.sin()];
        if grid.is_free(&p, &positions) {
            grid.insert(&p, positions.len());
            positions.push(p);
        } else {
            rejections += 1;
            if rejections > max_attempts {
                return Err(Error::Packing(format!(
                    "gave up after {rejections} rejections with {} of {} atoms placed",
                    positions.len(),
                    spec.count
                )));
            }
        }
    }
    Ok(positions)
}

/// Cells of side `d_min`: any conflicting point lies in the 27 cells around
/// a candidate.
struct HashGrid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
}

impl HashGrid {
    fn new(d_min: f64) -> Self {
        Self {
            cell: d_min,
            cells: HashMap::new(),
        }
    }

    fn key(&self, p: &Position) -> [i64; 3] {
        p.map(|c| (c / self.cell).floor() as i64)
    }

    fn insert(&mut self, p: &Position, index: usize) {
        if self.cell > 0.0 {
            self.cells.entry(self.key(p)).or_default().push(index);
        }
    }

    fn is_free(&self, p: &Position, placed: &[Position]) -> bool {
        if self.cell == 0.0 {
            return true;
        }
        let d2 = self.cell * self.cell;
        let [kx, ky, kz] = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = self.cells.get(&[kx + dx, ky + dy, kz + dz]) {
                        for &j in list {
                            if crate::model::network::distance_sq(p, &placed[j]) < d2 {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_atoms_in_bounds() {
        let spec = CylinderSpec::new(1000.0, 1000.0, 2, 0.1).unwrap();
        let pos = sample_cylinder(&spec, 1).unwrap();
        assert_eq!(pos.len(), 2);
        for p in &pos {
            assert!((0.0..=1000.0).contains(&p[0]));
            assert!(p[1].hypot(p[2]) <= 1000.0);
        }
    }

    #[test]
    fn deterministic_per_seed_and_instance() {
        let spec = CylinderSpec::new(30.0, 7.0, 200, 0.1).unwrap();
        let a = sample_cylinder(&spec, 9).unwrap();
        assert_eq!(a, sample_cylinder(&spec, 9).unwrap());
        assert_ne!(a, sample_cylinder(&spec, 10).unwrap());
        assert_ne!(a, sample_cylinder_instance(&spec, 9, 1).unwrap());
    }

    #[test]
    fn beyond_jamming_is_a_packing_error() {
        let spec = CylinderSpec::new(30.0, 7.0, 10_000_000, 0.1).unwrap();
        assert!(matches!(sample_cylinder(&spec, 0), Err(Error::Packing(_))));
    }

    #[test]
    fn fraction_and_density() {
        let spec = CylinderSpec::new(30.0, 7.0, 3000, 0.1).unwrap();
        assert!((spec.density() - 3000.0 / (PI * 49.0 * 30.0)).abs() < 1e-12);
        assert!(spec.volume_fraction() < 1e-3);
    }
}
