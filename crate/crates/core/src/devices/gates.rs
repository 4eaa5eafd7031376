use std::f64::consts::FRAC_PI_2;

use super::chains::ChainScale;
use super::DeviceInstance;
use crate::engine::EngineKind;
use crate::error::{domain, Result};
use crate::model::{AtomNetwork, Configuration, DetuningOverride, DetuningSchedule, Position};

/// Centre of the NOT pulse, in units of 1/Ω.
pub const NAND_PULSE_CENTER: f64 = 1.5;

/// Default integration step, before alignment to the pulse.
const BASE_DT: f64 = 0.005;

/// The four input pairs in truth-table order 00, 01, 10, 11.
pub fn gate_inputs() -> [[bool; 2]; 4] {
    [[false, false], [false, true], [true, false], [true, true]]
}

/// Output atom at the origin, inputs at distance `r_f` opened by 120°.
pub fn and_gate_positions(r_f: f64) -> [Position; 3] {
    let (s, c) = (2.0 * std::f64::consts::FRAC_PI_3).sin_cos();
    [
        [r_f * c, r_f * s, 0.0],
        [r_f * c, -r_f * s, 0.0],
        [0.0, 0.0, 0.0],
    ]
}

fn input_configuration(n: usize, bits: [bool; 2]) -> Configuration {
    let mut c = Configuration::ground(n);
    c.set(0, bits[0]);
    c.set(1, bits[1]);
    c
}

fn label(bits: [bool; 2]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Atoms 0 and 1 are the inputs, atom 2 the output at `2Δ_f`.
pub fn build_and_gate(bits: [bool; 2]) -> Result<DeviceInstance> {
    build_and_gate_with(ChainScale::default(), bits)
}

pub fn build_and_gate_with(scale: ChainScale, bits: [bool; 2]) -> Result<DeviceInstance> {
    let df = scale.delta_f();
    let network = AtomNetwork::new(
        and_gate_positions(scale.r_f).to_vec(),
        vec![df, df, 2.0 * df],
        scale.c6,
    )?;
    Ok(DeviceInstance {
        name: format!("and-{}", label(bits)),
        network,
        schedule: DetuningSchedule::empty(),
        initial: input_configuration(3, bits),
        output_sites: vec![2],
        engine_hint: EngineKind::Quantum,
        work_time: None,
        step_dt: None,
    })
}

/// Step size dividing the π/2 pulse into whole steps, and the pulse window
/// `[start, end)` with its start moved onto that step grid.
pub fn nand_window() -> (f64, f64, f64) {
    let steps = (FRAC_PI_2 / BASE_DT).round();
    let dt = FRAC_PI_2 / steps;
    let start = ((NAND_PULSE_CENTER - FRAC_PI_2 / 2.0) / dt).round();
    (dt, start * dt, (start + steps) * dt)
}

/// AND gate plus a NOT atom (index 3) at `r_f` from the AND output,
/// pulsed to zero detuning for π/(2Ω) around tΩ = 1.5.
pub fn build_nand_gate(bits: [bool; 2]) -> Result<DeviceInstance> {
    build_nand_gate_with(ChainScale::default(), bits)
}

pub fn build_nand_gate_with(scale: ChainScale, bits: [bool; 2]) -> Result<DeviceInstance> {
    if scale.r_f <= 0.0 {
        return Err(domain("r_f must be positive"));
    }
    let df = scale.delta_f();
    let mut positions = and_gate_positions(scale.r_f).to_vec();
    positions.push([scale.r_f, 0.0, 0.0]);
    let network = AtomNetwork::new(positions, vec![df, df, 2.0 * df, df], scale.c6)?;
    let (dt, t_start, t_end) = nand_window();
    let schedule = DetuningSchedule::new(vec![DetuningOverride {
        t_start,
        t_end,
        atom: 3,
        detuning: 0.0,
    }])?;
    Ok(DeviceInstance {
        name: format!("nand-{}", label(bits)),
        network,
        schedule,
        initial: input_configuration(4, bits),
        output_sites: vec![3],
        engine_hint: EngineKind::Quantum,
        work_time: None,
        step_dt: Some(dt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::local_mismatch;

    #[test]
    fn and_geometry() {
        let d = build_and_gate([true, true]).unwrap();
        let net = &d.network;
        assert!((net.distance(0, 2) - 1.0).abs() < 1e-15);
        assert!((net.distance(1, 2) - 1.0).abs() < 1e-15);
        assert!((net.distance(0, 1) - 3f64.sqrt()).abs() < 1e-14);
        assert!(local_mismatch(2, &d.initial, net).abs() < 1e-12);
        let one = build_and_gate([false, true]).unwrap();
        assert!((local_mismatch(2, &one.initial, &one.network) + 10.0).abs() < 1e-12);
    }

    #[test]
    fn nand_window_is_on_the_step_grid() {
        let (dt, a, b) = nand_window();
        assert!((b - a - FRAC_PI_2).abs() < 1e-12);
        assert!(((a + b) / 2.0 - NAND_PULSE_CENTER).abs() < dt);
        assert!(((a / dt) - (a / dt).round()).abs() < 1e-9);
        let d = build_nand_gate([false, false]).unwrap();
        d.validate().unwrap();
        assert_eq!(d.step_dt, Some(dt));
        assert!((d.network.distance(2, 3) - 1.0).abs() < 1e-15);
    }
}
