use crate::error::{Error, Result};
use crate::model::AtomNetwork;

/// Default capacity of the dense quantum engine.
pub const MAX_QUANTUM_ATOMS: usize = 12;

/// `H = Σ Δ_j n_j + Ω Σ σ^x_j + ½ Σ_{i≠j} C6 n_i n_j / r_ij^6`.
///
/// Stored as the diagonal plus the drive amplitude; off-diagonal entries
/// are `Ω` between configurations differing in exactly one bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n: usize,
    omega: f64,
    diagonal: Vec<f64>,
}

impl Hamiltonian {
    pub fn build(network: &AtomNetwork, detunings: &[f64], omega: f64) -> Result<Self> {
        Self::build_capped(network, detunings, omega, MAX_QUANTUM_ATOMS)
    }

    pub fn build_capped(
        network: &AtomNetwork,
        detunings: &[f64],
        omega: f64,
        cap: usize,
    ) -> Result<Self> {
        let n = network.len();
        if n > cap {
            return Err(Error::Capacity {
                engine: "quantum engine",
                n,
                cap,
            });
        }
        if detunings.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: detunings.len(),
            });
        }
        let mut interactions = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    interactions[i * n + j] = network.interaction(i, j);
                }
            }
        }
        let diagonal = (0..1usize << n)
            .map(|c| configuration_energy(c, n, detunings, &interactions))
            .collect();
        Ok(Self { n, omega, diagonal })
    }

    #[cfg(test)]
    pub(crate) fn from_parts(n: usize, omega: f64, diagonal: Vec<f64>) -> Self {
        debug_assert_eq!(diagonal.len(), 1 << n);
        Self { n, omega, diagonal }
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Structural off-diagonal count: one per atom per basis state.
    pub fn off_diagonal_nonzeros(&self) -> usize {
        self.n * self.dim()
    }

    pub fn element(&self, a: usize, b: usize) -> f64 {
        if a == b {
            self.diagonal[a]
        } else if (a ^ b).count_ones() == 1 {
            self.omega
        } else {
            0.0
        }
    }

    /// Dense row-major copy, for diagnostics and small-system checks.
    pub fn to_dense(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for a in 0..d {
            m[a * d + a] = self.diagonal[a];
            for k in 0..self.n {
                m[a * d + (a ^ (1 << k))] = self.omega;
            }
        }
        m
    }
}

fn configuration_energy(c: usize, n: usize, detunings: &[f64], interactions: &[f64]) -> f64 {
    let mut e = 0.0;
    for i in (0..n).filter(|&i| c >> i & 1 == 1) {
        e += detunings[i];
        for j in (i + 1..n).filter(|&j| c >> j & 1 == 1) {
            e += interactions[i * n + j];
        }
    }
    e
}
