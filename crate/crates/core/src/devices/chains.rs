use serde::{Deserialize, Serialize};

use super::DeviceInstance;
use crate::engine::EngineKind;
use crate::error::{domain, Result};
use crate::geometry::build_chain;
use crate::model::{facilitation_radius, Configuration, DetuningSchedule};

/// Readout time of the chain devices with dephasing (γ > 0).
pub const SWITCH_WORK_TIME: f64 = 4.60;
/// Readout time of the chain devices without dephasing.
pub const SWITCH_WORK_TIME_COHERENT: f64 = 3.20;

pub fn chain_work_time(gamma: f64) -> f64 {
    if gamma > 0.0 {
        SWITCH_WORK_TIME
    } else {
        SWITCH_WORK_TIME_COHERENT
    }
}

/// Interaction strength and facilitation spacing of the chain devices,
/// in units of Ω and of the spacing itself by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainScale {
    pub c6: f64,
    pub r_f: f64,
}

impl Default for ChainScale {
    fn default() -> Self {
        Self { c6: 10.0, r_f: 1.0 }
    }
}

impl ChainScale {
    pub fn new(c6: f64, r_f: f64) -> Result<Self> {
        if !(c6 > 0.0 && r_f > 0.0 && c6.is_finite() && r_f.is_finite()) {
            return Err(domain(format!("invalid chain scale C6={c6}, r_f={r_f}")));
        }
        Ok(Self { c6, r_f })
    }

    /// `Δ_f = -C6 / r_f^6`.
    pub fn delta_f(&self) -> f64 {
        -self.c6 / self.r_f.powi(6)
    }
}

fn excited_input(n: usize) -> Configuration {
    let mut c = Configuration::ground(n);
    c.set(0, true);
    c
}

/// Facilitation chain of `n` atoms at spacing `r_f`, all at `Δ_f`, with the
/// first atom excited; the last atom is the output.
pub fn transport_chain(n: usize, scale: ChainScale) -> Result<DeviceInstance> {
    if n < 2 {
        return Err(domain("transport chain needs at least two atoms"));
    }
    let network = build_chain(&vec![scale.r_f; n - 1], vec![scale.delta_f(); n], scale.c6)?;
    Ok(DeviceInstance {
        name: format!("transport-{n}"),
        network,
        schedule: DetuningSchedule::empty(),
        initial: excited_input(n),
        output_sites: vec![n - 1],
        engine_hint: EngineKind::Quantum,
        work_time: None,
        step_dt: None,
    })
}

/// Six-atom switch: input, gate at `delta_g`, four outputs.
pub fn build_switch_chain(delta_g: f64) -> Result<DeviceInstance> {
    build_switch_chain_with(ChainScale::default(), delta_g, 4)
}

/// Switch chain with `outputs` output atoms behind the gate.
pub fn build_switch_chain_with(
    scale: ChainScale,
    delta_g: f64,
    outputs: usize,
) -> Result<DeviceInstance> {
    if outputs == 0 {
        return Err(domain("switch needs at least one output atom"));
    }
    if !delta_g.is_finite() {
        return Err(domain("gate detuning must be finite"));
    }
    let n = outputs + 2;
    let mut detunings = vec![scale.delta_f(); n];
    detunings[1] = delta_g;
    let network = build_chain(&vec![scale.r_f; n - 1], detunings, scale.c6)?;
    Ok(DeviceInstance {
        name: "switch".into(),
        network,
        schedule: DetuningSchedule::empty(),
        initial: excited_input(n),
        output_sites: (2..n).collect(),
        engine_hint: EngineKind::Quantum,
        work_time: Some(SWITCH_WORK_TIME),
        step_dt: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiodeDirection {
    Forward,
    Reverse,
}

/// Index of the diode's gate atom.
const DIODE_GATE: usize = 2;
const DIODE_ATOMS: usize = 6;

/// `r_g = (-C6/Δ_g)^{1/6}`, the spacing that puts the gate on resonance.
pub fn gate_radius(delta_g: f64, c6: f64) -> Result<f64> {
    if !(delta_g < 0.0) {
        return Err(domain(format!(
            "diode gate detuning must be negative, got {delta_g}"
        )));
    }
    facilitation_radius(delta_g, c6)
}

/// Gaps of the six-atom diode. The short gap sits on the gate's input side
/// going forward and on its output side in reverse.
pub fn diode_gaps(direction: DiodeDirection, delta_g: f64, scale: ChainScale) -> Result<Vec<f64>> {
    let r_g = gate_radius(delta_g, scale.c6)?;
    let mut gaps = vec![scale.r_f; DIODE_ATOMS - 1];
    match direction {
        DiodeDirection::Forward => gaps[DIODE_GATE - 1] = r_g,
        DiodeDirection::Reverse => gaps[DIODE_GATE] = r_g,
    }
    Ok(gaps)
}

pub fn build_diode(direction: DiodeDirection, delta_g: f64) -> Result<DeviceInstance> {
    build_diode_with(ChainScale::default(), direction, delta_g)
}

pub fn build_diode_with(
    scale: ChainScale,
    direction: DiodeDirection,
    delta_g: f64,
) -> Result<DeviceInstance> {
    let gaps = diode_gaps(direction, delta_g, scale)?;
    let mut detunings = vec![scale.delta_f(); DIODE_ATOMS];
    detunings[DIODE_GATE] = delta_g;
    let network = build_chain(&gaps, detunings, scale.c6)?;
    Ok(DeviceInstance {
        name: match direction {
            DiodeDirection::Forward => "diode-forward".into(),
            DiodeDirection::Reverse => "diode-reverse".into(),
        },
        network,
        schedule: DetuningSchedule::empty(),
        initial: excited_input(DIODE_ATOMS),
        output_sites: (DIODE_GATE + 1..DIODE_ATOMS).collect(),
        engine_hint: EngineKind::Quantum,
        work_time: Some(SWITCH_WORK_TIME),
        step_dt: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::local_mismatch;

    #[test]
    fn switch_layout() {
        let d = build_switch_chain(-10.0).unwrap();
        assert_eq!(d.network.len(), 6);
        assert_eq!(d.output_sites, vec![2, 3, 4, 5]);
        assert_eq!(d.initial.to_string(), "100000");
        assert_eq!(d.network.static_detunings()[1], -10.0);
        d.validate().unwrap();
    }

    #[test]
    fn diode_gate_radius() {
        let r = gate_radius(-20.0, 10.0).unwrap();
        assert!((r - 0.5f64.powf(1.0 / 6.0)).abs() < 1e-15);
        assert!((r - 0.891).abs() < 1e-3);
        assert!(gate_radius(0.0, 10.0).is_err());
        assert!(build_diode(DiodeDirection::Forward, 5.0).is_err());
    }

    #[test]
    fn forward_gate_is_resonant_reverse_is_not() {
        let fwd = build_diode(DiodeDirection::Forward, -20.0).unwrap();
        let rev = build_diode(DiodeDirection::Reverse, -20.0).unwrap();
        let c: Configuration = "010000".parse().unwrap();
        assert!(local_mismatch(2, &c, &fwd.network).abs() < 0.2);
        assert!((local_mismatch(2, &c, &rev.network) + 10.0).abs() < 0.5);
        // With the gate excited, reverse still reaches atom 3 off resonance.
        let g: Configuration = "001000".parse().unwrap();
        assert!(local_mismatch(3, &g, &fwd.network).abs() < 1e-12);
        assert!(local_mismatch(3, &g, &rev.network) > 5.0);
    }

    #[test]
    fn diode_at_facilitation_is_symmetric() {
        let fwd = build_diode(DiodeDirection::Forward, -10.0).unwrap();
        let rev = build_diode(DiodeDirection::Reverse, -10.0).unwrap();
        assert_eq!(fwd.network, rev.network);
    }
}
