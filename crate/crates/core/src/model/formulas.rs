use super::configuration::Configuration;
use super::network::AtomNetwork;
use crate::error::{domain, Result};

/// Detuning that brings an atom at distance `r_f` from an excitation into
/// resonance: `-C6 / r_f^6`.
pub fn facilitation_detuning(r_f: f64, c6: f64) -> Result<f64> {
    if !(r_f > 0.0) || !(c6 > 0.0) {
        return Err(domain(format!(
            "facilitation detuning needs r_f > 0 and C6 > 0, got r_f = {r_f}, C6 = {c6}"
        )));
    }
    Ok(-c6 / r_f.powi(6))
}

/// Inverse of [`facilitation_detuning`]: `(-C6 / Δ)^{1/6}` for `Δ < 0`.
pub fn facilitation_radius(delta: f64, c6: f64) -> Result<f64> {
    if !(delta < 0.0) || !(c6 > 0.0) {
        return Err(domain(format!(
            "facilitation radius needs Δ < 0 and C6 > 0, got Δ = {delta}, C6 = {c6}"
        )));
    }
    Ok((-c6 / delta).powf(1.0 / 6.0))
}

/// Blockade radius `(C6 / Ω)^{1/6}`.
pub fn blockade_radius(c6: f64, omega: f64) -> Result<f64> {
    if !(c6 > 0.0) || !(omega > 0.0) {
        return Err(domain(format!(
            "blockade radius needs C6 > 0 and Ω > 0, got C6 = {c6}, Ω = {omega}"
        )));
    }
    Ok((c6 / omega).powf(1.0 / 6.0))
}

/// Both candidate blockade radii: the drive-limited `(C6/Ω)^{1/6}` used by
/// the library, and the linewidth-limited `(C6/γ)^{1/6}` that some
/// published parameter tables quote instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockadeRadii {
    pub rabi: f64,
    pub dephasing: Option<f64>,
}

pub fn blockade_radius_report(c6: f64, omega: f64, gamma: f64) -> Result<BlockadeRadii> {
    Ok(BlockadeRadii {
        rabi: blockade_radius(c6, omega)?,
        dephasing: (gamma > 0.0).then(|| (c6 / gamma).powf(1.0 / 6.0)),
    })
}

/// Energy mismatch of flipping atom `k`: its detuning plus the van der Waals
/// shift from every excited atom.
pub fn local_mismatch(k: usize, config: &Configuration, network: &AtomNetwork) -> f64 {
    local_mismatch_with(k, config.bits(), network, network.static_detunings())
}

/// [`local_mismatch`] with an explicit detuning snapshot.
pub fn local_mismatch_with(
    k: usize,
    bits: &[bool],
    network: &AtomNetwork,
    detunings: &[f64],
) -> f64 {
    debug_assert_eq!(bits.len(), network.len());
    let shift: f64 = bits
        .iter()
        .enumerate()
        .filter(|&(q, &b)| b && q != k)
        .map(|(q, _)| network.interaction(k, q))
        .sum();
    detunings[k] + shift
}
