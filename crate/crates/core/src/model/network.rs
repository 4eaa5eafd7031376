use serde::{Deserialize, Serialize};

use super::units::UnitSystem;
use crate::error::{domain, Error, Result};

pub type Position = [f64; 3];

/// Atom positions, per-atom static detunings and the van der Waals
/// coefficient shared by all pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNetwork")]
pub struct AtomNetwork {
    positions: Vec<Position>,
    static_detunings: Vec<f64>,
    c6: f64,
    #[serde(default)]
    units: UnitSystem,
}

#[derive(Deserialize)]
struct RawNetwork {
    positions: Vec<Position>,
    static_detunings: Vec<f64>,
    c6: f64,
    #[serde(default)]
    units: UnitSystem,
}

impl TryFrom<RawNetwork> for AtomNetwork {
    type Error = Error;

    fn try_from(raw: RawNetwork) -> Result<Self> {
        Self::with_units(raw.positions, raw.static_detunings, raw.c6, raw.units)
    }
}

impl AtomNetwork {
    /// Dimensionless network (frequencies in units of the Rabi frequency).
    pub fn new(positions: Vec<Position>, static_detunings: Vec<f64>, c6: f64) -> Result<Self> {
        Self::with_units(positions, static_detunings, c6, UnitSystem::Dimensionless)
    }

    pub fn with_units(
        positions: Vec<Position>,
        static_detunings: Vec<f64>,
        c6: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        if positions.is_empty() {
            return Err(domain("network needs at least one atom"));
        }
        if positions.len() != static_detunings.len() {
            return Err(Error::Shape {
                expected: positions.len(),
                got: static_detunings.len(),
            });
        }
        if !(c6 > 0.0 && c6.is_finite()) {
            return Err(domain(format!("C6 must be positive, got {c6}")));
        }
        if positions.iter().flatten().any(|x| !x.is_finite())
            || static_detunings.iter().any(|d| !d.is_finite())
        {
            return Err(domain("positions and detunings must be finite"));
        }
        if let Some((i, j)) = coincident_pair(&positions) {
            return Err(domain(format!("atoms {i} and {j} coincide")));
        }
        Ok(Self {
            positions,
            static_detunings,
            c6,
            units,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn static_detunings(&self) -> &[f64] {
        &self.static_detunings
    }

    pub fn c6(&self) -> f64 {
        self.c6
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(&self.positions[i], &self.positions[j])
    }

    /// Pair interaction energy `C6 / r^6`.
    pub fn interaction(&self, i: usize, j: usize) -> f64 {
        let r2 = distance_sq(&self.positions[i], &self.positions[j]);
        self.c6 / (r2 * r2 * r2)
    }

    /// Same geometry with a new set of static detunings.
    pub fn with_detunings(&self, static_detunings: Vec<f64>) -> Result<Self> {
        if static_detunings.len() != self.len() {
            return Err(Error::Shape {
                expected: self.len(),
                got: static_detunings.len(),
            });
        }
        Ok(Self {
            static_detunings,
            ..self.clone()
        })
    }

    /// Relabel atoms: atom `k` of the result is atom `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::Shape {
                expected: self.len(),
                got: perm.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(domain("not a permutation"));
            }
        }
        Ok(Self {
            positions: perm.iter().map(|&p| self.positions[p]).collect(),
            static_detunings: perm.iter().map(|&p| self.static_detunings[p]).collect(),
            ..self.clone()
        })
    }

    pub(crate) fn from_parts_unchecked(
        positions: Vec<Position>,
        static_detunings: Vec<f64>,
        c6: f64,
        units: UnitSystem,
    ) -> Self {
        Self {
            positions,
            static_detunings,
            c6,
            units,
        }
    }
}

pub(crate) fn distance_sq(a: &Position, b: &Position) -> f64 {
    (0..3).map(|d| (a[d] - b[d]).powi(2)).sum()
}

pub(crate) fn distance(a: &Position, b: &Position) -> f64 {
    distance_sq(a, b).sqrt()
}

fn coincident_pair(positions: &[Position]) -> Option<(usize, usize)> {
    // Sorting by x keeps the check near-linear for sampled gases.
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a][0].total_cmp(&positions[b][0]));
    for (w, &i) in order.iter().enumerate() {
        for &j in &order[w + 1..] {
            if positions[j][0] != positions[i][0] {
                break;
            }
            if distance_sq(&positions[i], &positions[j]) == 0.0 {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_invariants() {
        assert!(AtomNetwork::new(vec![], vec![], 1.0).is_err());
        assert!(AtomNetwork::new(vec![[0.0; 3]], vec![0.0, 1.0], 1.0).is_err());
        assert!(AtomNetwork::new(vec![[0.0; 3]], vec![0.0], 0.0).is_err());
        assert!(AtomNetwork::new(vec![[0.0; 3], [0.0; 3]], vec![0.0, 0.0], 1.0).is_err());
        let net = AtomNetwork::new(vec![[0.0; 3], [2.0, 0.0, 0.0]], vec![0.0, 0.0], 64.0).unwrap();
        assert_eq!(net.interaction(0, 1), 1.0);
    }

    #[test]
    fn permutation_relabels_atoms() {
        let net = AtomNetwork::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [3.0, 0.0, 0.0]],
            vec![1.0, 2.0, 3.0],
            10.0,
        )
        .unwrap();
        let p = net.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.static_detunings(), &[3.0, 1.0, 2.0]);
        assert_eq!(p.distance(0, 1), 3.0);
        assert!(net.permuted(&[0, 0, 1]).is_err());
    }

    #[test]
    fn deserialization_validates() {
        let bad = r#"{"positions":[[0,0,0],[0,0,0]],"static_detunings":[0,0],"c6":1}"#;
        assert!(serde_json::from_str::<AtomNetwork>(bad).is_err());
        let ok = r#"{"positions":[[0,0,0],[1,0,0]],"static_detunings":[0,0],"c6":1}"#;
        assert_eq!(serde_json::from_str::<AtomNetwork>(ok).unwrap().len(), 2);
    }
}
