use num_complex::Complex64;

use super::density::DensityMatrix;
use super::hamiltonian::Hamiltonian;
use super::lindblad::rhs_into;
use crate::error::{Error, Result};
use crate::model::{AtomNetwork, DetuningSchedule, SimParams};
use crate::ode::Rk4;
pub use crate::ode::StepOptions;
use crate::series::{Conservation, Observables, TimeSeries};

/// Integrate the master equation from `rho0` to `t_end` with fixed-step RK4.
///
/// Detunings are sampled at each step midpoint, so schedule breakpoints that
/// fall on the step grid are honored exactly and others snap to it.
pub fn evolve_quantum(
    network: &AtomNetwork,
    schedule: &DetuningSchedule,
    params: &SimParams,
    rho0: &DensityMatrix,
    t_end: f64,
    options: &StepOptions,
    observables: &Observables,
) -> Result<TimeSeries> {
    evolve_quantum_with(
        network,
        schedule,
        params,
        rho0,
        t_end,
        options,
        observables,
        |_| {},
    )
}

/// [`evolve_quantum`], calling `inspect` with the state at every recorded
/// sample.
#[allow(clippy::too_many_arguments)]
pub fn evolve_quantum_with(
    network: &AtomNetwork,
    schedule: &DetuningSchedule,
    params: &SimParams,
    rho0: &DensityMatrix,
    t_end: f64,
    options: &StepOptions,
    observables: &Observables,
    mut inspect: impl FnMut(&DensityMatrix),
) -> Result<TimeSeries> {
    let n = network.len();
    if rho0.n_atoms() != n {
        return Err(Error::Shape {
            expected: n,
            got: rho0.n_atoms(),
        });
    }
    schedule.validate_for(network)?;
    observables.validate(n)?;
    let plan = options.plan(t_end)?;

    let mut detunings = schedule.snapshot(network, 0.5 * plan.dt);
    let mut ham = Hamiltonian::build(network, &detunings, params.omega())?;
    let (omega, gamma, kappa) = (params.omega(), params.gamma(), params.kappa());

    let mut series = TimeSeries::new("quantum", observables.sites.clone());
    let mut conservation = Conservation {
        min_population: f64::INFINITY,
        ..Conservation::default()
    };
    let mut rho = rho0.as_slice().to_vec();
    let mut rk = Rk4::<Complex64>::new(rho.len());
    let mut record = plan.record.iter().peekable();

    for step in 0..=plan.n_steps {
        if record.next_if_eq(&&step).is_some() {
            let t = plan.time(step);
            let state = DensityMatrix::from_raw(n, rho.clone(), t);
            let stats = Conservation {
                max_norm_drift: (state.trace() - 1.0).norm(),
                max_hermiticity_error: state.hermiticity_error(),
                min_population: state.min_diagonal(),
            };
            if !(stats.max_norm_drift <= 1e-6) {
                return Err(Error::IntegrationFailure {
                    time: t,
                    reason: format!("trace drifted by {:e}", stats.max_norm_drift),
                });
            }
            conservation = conservation.merge(stats);
            series.push(
                t,
                observables.sites.iter().map(|&j| state.excitation(j)),
                observables
                    .output
                    .iter()
                    .map(|&j| state.excitation(j))
                    .sum(),
            );
            inspect(&state);
        }
        if step == plan.n_steps {
            break;
        }
        if !schedule.is_empty() {
            let now = schedule.snapshot(network, plan.time(step) + 0.5 * plan.dt);
            if now != detunings {
                detunings = now;
                ham = Hamiltonian::build(network, &detunings, omega)?;
            }
        }
        let diag = ham.diagonal();
        rk.step(&mut rho, plan.dt, |y, dy| {
            rhs_into(n, y, diag, omega, gamma, kappa, dy)
        });
    }
    series.meta.conservation = Some(conservation);
    Ok(series)
}
