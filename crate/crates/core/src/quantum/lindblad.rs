use num_complex::Complex64;

use super::density::DensityMatrix;
use super::hamiltonian::Hamiltonian;
use crate::error::{Error, Result};
use crate::model::SimParams;

/// `dρ/dt = -i[H, ρ] + Σ_k γ D[n_k]ρ + Σ_k κ D[σ⁻_k]ρ`.
///
/// Returned row-major, same layout as the input.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    hamiltonian: &Hamiltonian,
    params: &SimParams,
) -> Result<Vec<Complex64>> {
    if rho.dim() != hamiltonian.dim() {
        return Err(Error::Shape {
            expected: hamiltonian.dim(),
            got: rho.dim(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); rho.as_slice().len()];
    rhs_into(
        rho.n_atoms(),
        rho.as_slice(),
        hamiltonian.diagonal(),
        hamiltonian.omega(),
        params.gamma(),
        params.kappa(),
        &mut out,
    );
    Ok(out)
}

/// Elementwise form of the generator on basis indices `a, b`:
///
/// * commutator: `-i (E_a - E_b) ρ_ab - iΩ Σ_k (ρ_{a^k,b} - ρ_{a,b^k})`;
/// * dephasing: `n_k ρ n_k - ½{n_k, ρ}` with `n_k² = n_k` reduces to
///   `-(γ/2) |a ⊕ b| ρ_ab`;
/// * decay: `κ ρ_{a+k,b+k}` when bit `k` is clear in both, minus
///   `(κ/2)(|a| + |b|) ρ_ab`.
pub(crate) fn rhs_into(
    n: usize,
    rho: &[Complex64],
    diagonal: &[f64],
    omega: f64,
    gamma: f64,
    kappa: f64,
    out: &mut [Complex64],
) {
    let d = 1usize << n;
    debug_assert_eq!(rho.len(), d * d);
    let minus_i_omega = Complex64::new(0.0, -omega);
    for a in 0..d {
        let row = a * d;
        let ea = diagonal[a];
        let pa = a.count_ones() as f64;
        for b in 0..d {
            let r = rho[row + b];
            let damping = 0.5 * gamma * (a ^ b).count_ones() as f64
                + 0.5 * kappa * (pa + b.count_ones() as f64);
            let acc = Complex64::new(-damping, diagonal[b] - ea) * r;
            let mut flips = Complex64::new(0.0, 0.0);
            let mut gain = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let m = 1usize << k;
                flips += rho[(a ^ m) * d + b] - rho[row + (b ^ m)];
                if a & m == 0 && b & m == 0 {
                    gain += rho[(a | m) * d + (b | m)];
                }
            }
            out[row + b] = acc + minus_i_omega * flips + gain * kappa;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AtomNetwork, Configuration};
    use approx::assert_relative_eq;

    #[test]
    fn dephasing_fixes_maximally_mixed_state() {
        let far = AtomNetwork::new(
            vec![[0.0; 3], [1e3, 0.0, 0.0], [2e3, 0.0, 0.0]],
            vec![0.0; 3],
            1e-30,
        )
        .unwrap();
        let h = Hamiltonian::build(&far, &[0.0; 3], 1.0).unwrap();
        let zero_h = Hamiltonian::from_parts(3, 0.0, vec![0.0; 8]);
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let p = SimParams::dimensionless(2.5, 0.0).unwrap();
        let out = lindblad_rhs(&rho, &zero_h, &p).unwrap();
        assert!(out.iter().all(|z| z.norm() < 1e-15));
        // Drive acting on the identity also commutes.
        let out = lindblad_rhs(&rho, &h, &p).unwrap();
        assert!(out.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn pure_decay_generator() {
        let one = Configuration::with_excited(1, &[0]).unwrap();
        let rho = DensityMatrix::from_configuration(&one).unwrap();
        let h = Hamiltonian::from_parts(1, 0.0, vec![0.0, 0.0]);
        let kappa = 0.3;
        let p = SimParams::dimensionless(0.0, kappa).unwrap();
        let out = lindblad_rhs(&rho, &h, &p).unwrap();
        assert_relative_eq!(out[0].re, kappa);
        assert_relative_eq!(out[3].re, -kappa);
        assert_eq!(out[1].norm(), 0.0);
        assert_eq!(out[2].norm(), 0.0);
    }

    #[test]
    fn matches_dense_commutator_for_two_atoms() {
        let net = AtomNetwork::new(vec![[0.0; 3], [1.2, 0.0, 0.0]], vec![-3.0, 0.7], 10.0).unwrap();
        let h = Hamiltonian::build(&net, net.static_detunings(), 0.8).unwrap();
        let d = 4;
        let hd = h.to_dense();
        // An arbitrary Hermitian unit-trace matrix.
        let mut data = vec![Complex64::new(0.0, 0.0); 16];
        let diag = [0.4, 0.3, 0.2, 0.1];
        for a in 0..d {
            data[a * d + a] = Complex64::new(diag[a], 0.0);
            for b in a + 1..d {
                let z = Complex64::new(0.03 * (a + b) as f64, 0.02 * (b as f64 - a as f64));
                data[a * d + b] = z;
                data[b * d + a] = z.conj();
            }
        }
        let rho = DensityMatrix::from_elements(2, data.clone()).unwrap();
        let p = SimParams::new(0.8, 0.0, 0.0).unwrap();
        let out = lindblad_rhs(&rho, &h, &p).unwrap();
        for a in 0..d {
            for b in 0..d {
                let mut c = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    c += hd[a * d + k] * data[k * d + b] - data[a * d + k] * hd[k * d + b];
                }
                let expect = Complex64::new(0.0, -1.0) * c;
                assert!((out[a * d + b] - expect).norm() < 1e-13);
            }
        }
    }
}
