use crate::error::{domain, Error, Result};
use crate::model::{local_mismatch, AtomNetwork, Configuration, SimParams};

/// Default capacity of the exact probability-vector engine.
pub const MAX_EXACT_ATOMS: usize = 14;

/// Lorentzian flip rate for a given local mismatch.
#[inline]
pub fn rate_from_mismatch(mismatch: f64, omega: f64, gamma: f64) -> f64 {
    let half = 0.5 * gamma;
    omega * omega * gamma / (half * half + mismatch * mismatch)
}

fn require_dephasing(params: &SimParams) -> Result<()> {
    if params.gamma() > 0.0 {
        Ok(())
    } else {
        Err(domain("rate equations need a positive dephasing rate"))
    }
}

/// Flip rate `Γ_k` of atom `k` in `config` (without the decay channel).
pub fn transition_rate(
    k: usize,
    config: &Configuration,
    network: &AtomNetwork,
    params: &SimParams,
) -> Result<f64> {
    require_dephasing(params)?;
    if config.len() != network.len() {
        return Err(Error::Shape {
            expected: network.len(),
            got: config.len(),
        });
    }
    if k >= network.len() {
        return Err(domain(format!("atom {k} out of range")));
    }
    Ok(rate_from_mismatch(
        local_mismatch(k, config, network),
        params.omega(),
        params.gamma(),
    ))
}

/// Rate matrix of the classical master equation on the `2^N` configurations.
///
/// Stored as exit rates: `flip_rate(c, k)` is the rate of `c -> c ^ (1 << k)`,
/// i.e. `Γ_k(c)` plus κ when bit `k` is set. The dense form has these on the
/// off-diagonal and minus their column sums on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RateGenerator {
    n: usize,
    rates: Vec<f64>,
}

impl RateGenerator {
    pub fn build(network: &AtomNetwork, params: &SimParams, detunings: &[f64]) -> Result<Self> {
        require_dephasing(params)?;
        let n = network.len();
        if n > MAX_EXACT_ATOMS {
            return Err(Error::Capacity {
                engine: "exact classical engine",
                n,
                cap: MAX_EXACT_ATOMS,
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
        let (omega, gamma, kappa) = (params.omega(), params.gamma(), params.kappa());
        let dim = 1usize << n;
        let mut rates = vec![0.0; dim * n];
        for c in 0..dim {
            for k in 0..n {
                let shift: f64 = (0..n)
                    .filter(|&q| q != k && c >> q & 1 == 1)
                    .map(|q| interactions[k * n + q])
                    .sum();
                let mut r = rate_from_mismatch(detunings[k] + shift, omega, gamma);
                if c >> k & 1 == 1 {
                    r += kappa;
                }
                rates[c * n + k] = r;
            }
        }
        Ok(Self { n, rates })
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn flip_rate(&self, c: usize, k: usize) -> f64 {
        self.rates[c * self.n + k]
    }

    /// Dense entry `G[to][from]`.
    pub fn entry(&self, to: usize, from: usize) -> f64 {
        let diff = to ^ from;
        if diff == 0 {
            -(0..self.n).map(|k| self.flip_rate(from, k)).sum::<f64>()
        } else if diff.count_ones() == 1 {
            self.flip_rate(from, diff.trailing_zeros() as usize)
        } else {
            0.0
        }
    }

    /// Dense row-major copy `G[to * dim + from]`.
    pub fn to_dense(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for to in 0..d {
            for from in 0..d {
                m[to * d + from] = self.entry(to, from);
            }
        }
        m
    }

    /// `dp = G p`.
    pub(crate) fn apply(&self, p: &[f64], dp: &mut [f64]) {
        let n = self.n;
        for (c, out) in dp.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..n {
                let src = c ^ (1 << k);
                acc += self.rates[src * n + k] * p[src] - self.rates[c * n + k] * p[c];
            }
            *out = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(gamma: f64, kappa: f64) -> SimParams {
        SimParams::dimensionless(gamma, kappa).unwrap()
    }

    #[test]
    fn rate_examples() {
        let single = AtomNetwork::new(vec![[0.0; 3]], vec![0.0], 10.0).unwrap();
        let g = Configuration::ground(1);
        assert_eq!(
            transition_rate(0, &g, &single, &params(1.0, 0.0)).unwrap(),
            4.0
        );

        let pair =
            AtomNetwork::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], vec![-10.0, -10.0], 10.0).unwrap();
        let one = Configuration::with_excited(2, &[0]).unwrap();
        assert_eq!(
            transition_rate(1, &one, &pair, &params(1.0, 0.0)).unwrap(),
            4.0
        );
        let r = transition_rate(1, &Configuration::ground(2), &pair, &params(1.0, 0.0)).unwrap();
        assert_relative_eq!(r, 1.0 / 100.25, max_relative = 1e-15);

        assert!(transition_rate(0, &g, &single, &params(0.0, 0.0)).is_err());
    }

    #[test]
    fn single_atom_generators() {
        let single = AtomNetwork::new(vec![[0.0; 3]], vec![0.0], 10.0).unwrap();
        let g = RateGenerator::build(&single, &params(1.0, 0.0), &[0.0]).unwrap();
        assert_eq!(g.to_dense(), vec![-4.0, 4.0, 4.0, -4.0]);

        // A vanishing drive leaves only the decay channel.
        let kappa = 0.25;
        let p = SimParams::new(1e-12, 1.0, kappa).unwrap();
        let g = RateGenerator::build(&single, &p, &[0.0]).unwrap();
        let dense = g.to_dense();
        let expect = [0.0, kappa, 0.0, -kappa];
        for (a, b) in dense.iter().zip(expect) {
            assert!((a - b).abs() < 1e-20);
        }
    }

    #[test]
    fn capacity_error() {
        let positions = (0..15).map(|i| [i as f64, 0.0, 0.0]).collect();
        let net = AtomNetwork::new(positions, vec![0.0; 15], 1.0).unwrap();
        assert!(matches!(
            RateGenerator::build(&net, &params(1.0, 0.0), &[0.0; 15]),
            Err(Error::Capacity { cap: 14, .. })
        ));
    }
}
