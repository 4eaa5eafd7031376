use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::comparison::{cross_engine, quantum_vs_classical};
use super::conservation_ok;
use crate::classical::{run_kmc_ensemble, KmcSystem, NeighborTable};
use crate::devices::{build_switch_chain, transport_chain, ChainScale, DeviceInstance};
use crate::engine::{run_device, EngineKind, RunSettings};
use crate::error::Result;
use crate::model::{AtomNetwork, Configuration, DetuningSchedule, SimParams};
use crate::series::{uniform_grid, Observables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A mismatch that the model predicts, reported but not a failure.
    ExpectedDivergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn bound(name: &str, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if value < tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            value,
            tolerance,
            detail: detail.into(),
        }
    }

    fn errored(name: &str, tolerance: f64, err: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::Fail,
            value: f64::NAN,
            tolerance,
            detail: format!("engine error: {err}"),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::ExpectedDivergent => "EXPECTED-DIVERGENT",
        };
        write!(
            f,
            "{tag:<18} {:<28} value={:.3e} tol={:.1e}  {}",
            self.name, self.value, self.tolerance, self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    /// Step override for the dense engines; disables the step cap.
    pub dt: Option<f64>,
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            dt: None,
            trajectories: 10_000,
            seed: 20_240_601,
        }
    }
}

fn single_atom(detuning: f64) -> Result<DeviceInstance> {
    Ok(DeviceInstance {
        name: "single-atom".into(),
        network: AtomNetwork::new(vec![[0.0; 3]], vec![detuning], 1.0)?,
        schedule: DetuningSchedule::empty(),
        initial: Configuration::ground(1),
        output_sites: vec![0],
        engine_hint: EngineKind::Quantum,
        work_time: None,
        step_dt: None,
    })
}

fn dense_settings(t_end: f64, opts: &ValidateOptions) -> RunSettings {
    let mut s = RunSettings::new(t_end).with_seed(opts.seed);
    s.trajectories = opts.trajectories;
    if let Some(dt) = opts.dt {
        s.dt = Some(dt);
        s.unchecked_dt = true;
    }
    s
}

fn rabi(opts: &ValidateOptions) -> Check {
    const NAME: &str = "rabi oscillation";
    const TOL: f64 = 1e-6;
    let run = || -> Result<f64> {
        let device = single_atom(0.0)?;
        let params = SimParams::dimensionless(0.0, 0.0)?;
        let s = run_device(
            &device,
            &params,
            EngineKind::Quantum,
            &dense_settings(2.0 * PI, opts),
        )?;
        Ok(s.times
            .iter()
            .zip(&s.output)
            .map(|(t, n)| (n - t.sin().powi(2)).abs())
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(err) => {
            let mut c = Check::bound(NAME, err, TOL, "max |<n>(t) - sin²(Ωt)| over one period");
            if c.failed() {
                c.detail = format!(
                    "max |<n>(t) - sin²(Ωt)| = {err:.3e} exceeds {TOL:.0e}; step {} is too coarse",
                    opts.dt.map_or("default".into(), |d| d.to_string())
                );
            }
            c
        }
        Err(e) => Check::errored(NAME, TOL, e),
    }
}

fn decay(opts: &ValidateOptions) -> Check {
    const NAME: &str = "pure decay (sampled)";
    const TOL: f64 = 3.0;
    let run = || -> Result<f64> {
        // Far off resonance the drive is negligible and only decay acts.
        let network = AtomNetwork::new(vec![[0.0; 3]], vec![1e4], 1.0)?;
        let params = SimParams::dimensionless(1.0, 1.0)?;
        let settings = dense_settings(3.0, opts);
        let table = NeighborTable::build(&network, 1.0)?;
        let schedule = DetuningSchedule::empty();
        let system = KmcSystem::new(&network, &table, params, &schedule)?;
        let grid = uniform_grid(settings.t_end, settings.samples)?;
        let s = run_kmc_ensemble(
            &system,
            &"1".parse()?,
            settings.t_end,
            &grid,
            &Observables::output_only(vec![0]),
            opts.seed,
            0,
            opts.trajectories,
        )?
        .finish()?;
        let m = settings.trajectories as f64;
        Ok(s.times
            .iter()
            .zip(&s.output)
            .map(|(t, n)| {
                let p = (-t).exp();
                let sigma = (p * (1.0 - p) / m).sqrt();
                if sigma > 0.0 {
                    (n - p).abs() / sigma
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(z) => Check::bound(
            NAME,
            z,
            TOL,
            format!(
                "max |<n> - e^(-κt)| in standard errors, {} trajectories",
                opts.trajectories
            ),
        ),
        Err(e) => Check::errored(NAME, TOL, e),
    }
}

fn relaxation(opts: &ValidateOptions) -> Check {
    const NAME: &str = "two-state relaxation";
    const TOL: f64 = 1e-8;
    let run = || -> Result<f64> {
        let device = single_atom(0.0)?;
        let params = SimParams::dimensionless(1.0, 0.0)?;
        let s = run_device(
            &device,
            &params,
            EngineKind::ClassicalExact,
            &dense_settings(2.0, opts),
        )?;
        Ok(s.times
            .iter()
            .zip(&s.output)
            .map(|(t, n)| (n - 0.5 * (1.0 - (-8.0 * t).exp())).abs())
            .fold(0.0, f64::max))
    };
    match run() {
        Ok(err) => Check::bound(NAME, err, TOL, "max |p(t) - (1 - e^(-8t))/2| at Ω = γ = 1"),
        Err(e) => Check::errored(NAME, TOL, e),
    }
}

/// Quantum against classical-exact on the three-atom chain; at weak
/// dephasing the mismatch is the expected outcome.
fn quantum_classical(gamma: f64, opts: &ValidateOptions) -> Check {
    const TOL: f64 = 0.05;
    let name = format!("quantum vs classical γ={gamma}");
    let run = || -> Result<f64> {
        let params = SimParams::dimensionless(gamma, 0.003)?;
        let cmp = quantum_vs_classical(
            3,
            ChainScale::default(),
            &params,
            4.0,
            &dense_settings(4.0, opts),
        )?;
        Ok(cmp.max_difference)
    };
    match run() {
        Ok(d) if gamma >= 1.0 => Check::bound(&name, d, TOL, "max per-site difference, t ≤ 4/Ω"),
        Ok(d) => Check {
            name,
            status: if d > TOL {
                CheckStatus::ExpectedDivergent
            } else {
                CheckStatus::Fail
            },
            value: d,
            tolerance: TOL,
            detail: if d > TOL {
                "coherences too strong for the rate equation, as expected".into()
            } else {
                "expected the engines to diverge at weak dephasing".into()
            },
        },
        Err(e) => Check::errored(&name, TOL, e),
    }
}

fn sampler(opts: &ValidateOptions) -> Check {
    const NAME: &str = "sampler vs propagator N=3";
    const TOL: f64 = 0.02;
    let run = || -> Result<f64> {
        let device = transport_chain(3, ChainScale::default())?;
        let params = SimParams::dimensionless(1.0, 0.003)?;
        Ok(cross_engine(&device, &params, &dense_settings(8.0, opts))?.max_difference)
    };
    match run() {
        Ok(d) => Check::bound(
            NAME,
            d,
            TOL,
            format!(
                "max per-site difference, {} trajectories",
                opts.trajectories
            ),
        ),
        Err(e) => Check::errored(NAME, TOL, e),
    }
}

fn conservation(opts: &ValidateOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let params = match SimParams::dimensionless(1.0, 0.003) {
        Ok(p) => p,
        Err(e) => return vec![Check::errored("conservation", 0.0, e)],
    };
    for engine in [EngineKind::Quantum, EngineKind::ClassicalExact] {
        let name = format!("conservation {engine}");
        let run = || -> Result<_> {
            let device = build_switch_chain(-10.0)?;
            run_device(&device, &params, engine, &dense_settings(8.0, opts))
        };
        checks.push(match run() {
            Ok(s) => {
                let c = s.meta.conservation.unwrap_or_default();
                Check {
                    name,
                    status: if conservation_ok(&s) {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    },
                    value: c.max_norm_drift.max(c.max_hermiticity_error),
                    tolerance: if engine == EngineKind::Quantum {
                        1e-8
                    } else {
                        1e-9
                    },
                    detail: format!(
                        "norm drift {:.1e}, hermiticity {:.1e}, min population {:.1e}",
                        c.max_norm_drift, c.max_hermiticity_error, c.min_population
                    ),
                }
            }
            Err(e) => Check::errored(&name, 0.0, e),
        });
    }
    checks
}

/// Analytic oracles, engine cross-checks and conservation, in a fixed
/// order.
pub fn validate(opts: &ValidateOptions) -> Vec<Check> {
    let mut checks = vec![
        rabi(opts),
        decay(opts),
        relaxation(opts),
        quantum_classical(10.0, opts),
        quantum_classical(0.1, opts),
        sampler(opts),
    ];
    checks.extend(conservation(opts));
    checks
}
