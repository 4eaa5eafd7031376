use num_complex::Complex64;

use super::hamiltonian::MAX_QUANTUM_ATOMS;
use crate::error::{domain, Error, Result};
use crate::model::Configuration;

/// Row-major `2^N × 2^N` density matrix with a time stamp.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
    time: f64,
}

impl DensityMatrix {
    /// Pure computational-basis state `|c⟩⟨c|`.
    pub fn from_configuration(config: &Configuration) -> Result<Self> {
        let n = config.len();
        check_cap(n)?;
        let d = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        let c = config.to_index();
        data[c * d + c] = Complex64::new(1.0, 0.0);
        Ok(Self { n, data, time: 0.0 })
    }

    /// `1 / 2^N`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_cap(n)?;
        let d = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for a in 0..d {
            data[a * d + a] = Complex64::new(1.0 / d as f64, 0.0);
        }
        Ok(Self { n, data, time: 0.0 })
    }

    /// Wrap raw row-major elements after checking the density-matrix
    /// invariants (unit trace, Hermitian, non-negative diagonal).
    pub fn from_elements(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_cap(n)?;
        let d = 1usize << n;
        if data.len() != d * d {
            return Err(Error::Shape {
                expected: d * d,
                got: data.len(),
            });
        }
        let rho = Self { n, data, time: 0.0 };
        if (rho.trace() - 1.0).norm() > 1e-8 {
            return Err(domain("density matrix trace must be 1"));
        }
        if rho.hermiticity_error() > 1e-10 {
            return Err(domain("density matrix must be Hermitian"));
        }
        if rho.min_diagonal() < -1e-10 {
            return Err(domain("density matrix diagonal must be non-negative"));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>, time: f64) -> Self {
        Self { n, data, time }
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.data[a * self.dim() + b]
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|a| self.data[a * d + a]).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in a..d {
                worst = worst.max((self.data[a * d + b] - self.data[b * d + a].conj()).norm());
            }
        }
        worst
    }

    pub fn min_diagonal(&self) -> f64 {
        self.populations().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Real parts of the diagonal: the configuration probabilities.
    pub fn populations(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|a| self.data[a * d + a].re).collect()
    }

    /// `Tr ρ²`, assuming Hermiticity.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨n_j⟩ = Tr(ρ n_j)`.
    pub fn excitation(&self, j: usize) -> f64 {
        let d = self.dim();
        (0..d)
            .filter(|&c| c >> j & 1 == 1)
            .map(|c| self.data[c * d + c].re)
            .sum()
    }

    /// Relabel atoms: atom `k` of the result is atom `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Shape {
                expected: self.n,
                got: perm.len(),
            });
        }
        let d = self.dim();
        let map = |c: usize| {
            perm.iter()
                .enumerate()
                .fold(0, |acc, (k, &p)| acc | ((c >> p & 1) << k))
        };
        let image: Vec<usize> = (0..d).map(map).collect();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for a in 0..d {
            for b in 0..d {
                data[image[a] * d + image[b]] = self.data[a * d + b];
            }
        }
        Ok(Self {
            n: self.n,
            data,
            time: self.time,
        })
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("density matrix needs at least one atom"));
    }
    if n > MAX_QUANTUM_ATOMS {
        return Err(Error::Capacity {
            engine: "quantum engine",
            n,
            cap: MAX_QUANTUM_ATOMS,
        });
    }
    Ok(())
}

/// Output excitation count `N_o = Σ_{j ∈ output} Tr(ρ n_j)`.
pub fn measure_output(rho: &DensityMatrix, output_sites: &[usize]) -> Result<f64> {
    if let Some(&s) = output_sites.iter().find(|&&s| s >= rho.n_atoms()) {
        return Err(domain(format!(
            "output site {s} out of range for {} atoms",
            rho.n_atoms()
        )));
    }
    Ok(output_sites.iter().map(|&j| rho.excitation(j)).sum())
}
