use crate::error::{domain, Result};
use crate::model::AtomNetwork;

/// Per-atom lists of interaction partners above an energy floor, stored in
/// compressed rows.
///
/// The cutoff radius follows from `C6 / r_cut^6 = floor`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    floor: f64,
    start: Vec<usize>,
    neighbors: Vec<usize>,
    energies: Vec<f64>,
}

impl NeighborTable {
    pub fn build(network: &AtomNetwork, interaction_floor: f64) -> Result<Self> {
        if !(interaction_floor > 0.0) {
            return Err(domain(format!(
                "interaction floor must be positive, got {interaction_floor}"
            )));
        }
        let n = network.len();
        let r_cut = (network.c6() / interaction_floor).powf(1.0 / 6.0);
        let pos = network.positions();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| pos[a][0].total_cmp(&pos[b][0]));

        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (w, &i) in order.iter().enumerate() {
            for &j in &order[w + 1..] {
                if pos[j][0] - pos[i][0] > r_cut {
                    break;
                }
                let v = network.interaction(i, j);
                if v > interaction_floor {
                    lists[i].push((j, v));
                    lists[j].push((i, v));
                }
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut energies = Vec::new();
        start.push(0);
        for mut list in lists {
            list.sort_by_key(|&(j, _)| j);
            for (j, v) in list {
                neighbors.push(j);
                energies.push(v);
            }
            start.push(neighbors.len());
        }
        Ok(Self {
            floor: interaction_floor,
            start,
            neighbors,
            energies,
        })
    }

    pub fn len(&self) -> usize {
        self.start.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn interaction_floor(&self) -> f64 {
        self.floor
    }

    /// `(neighbor, C6 / r^6)` pairs of atom `i`, sorted by neighbor index.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.start[i]..self.start[i + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.energies[range].iter().copied())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.start[i + 1] - self.start[i]
    }

    pub fn total_entries(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| {
            self.neighbors(i).all(|(j, v)| {
                let range = self.start[j]..self.start[j + 1];
                self.neighbors[range.clone()]
                    .binary_search(&i)
                    .is_ok_and(|p| self.energies[range.start + p] == v)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_and_symmetry() {
        let net = AtomNetwork::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 3.0, 0.0]],
            vec![0.0; 4],
            64.0,
        )
        .unwrap();
        // Floor 1 keeps pairs closer than r = 2.
        let t = NeighborTable::build(&net, 1.0).unwrap();
        assert!(t.is_symmetric());
        assert_eq!(t.neighbors(0).collect::<Vec<_>>(), vec![(1, 64.0)]);
        assert_eq!(t.neighbors(1).map(|p| p.0).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(t.degree(3), 0);
        assert!(NeighborTable::build(&net, 0.0).is_err());
    }
}
