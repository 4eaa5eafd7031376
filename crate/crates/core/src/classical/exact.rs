use super::rates::{RateGenerator, MAX_EXACT_ATOMS};
use crate::error::{domain, Error, Result};
use crate::model::{AtomNetwork, Configuration, DetuningSchedule, SimParams};
use crate::ode::{Rk4, StepOptions};
use crate::series::{Conservation, Observables, TimeSeries};

/// Probability distribution over the `2^N` configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    n: usize,
    p: Vec<f64>,
    time: f64,
}

impl ProbabilityVector {
    pub fn from_configuration(config: &Configuration) -> Result<Self> {
        let n = check_cap(config.len())?;
        let mut p = vec![0.0; 1 << n];
        p[config.to_index()] = 1.0;
        Ok(Self { n, p, time: 0.0 })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let n = check_cap(n)?;
        let d = 1usize << n;
        Ok(Self {
            n,
            p: vec![1.0 / d as f64; d],
            time: 0.0,
        })
    }

    /// Entries must be non-negative and sum to one within 1e-12.
    pub fn from_probabilities(n: usize, p: Vec<f64>) -> Result<Self> {
        let n = check_cap(n)?;
        if p.len() != 1 << n {
            return Err(Error::Shape {
                expected: 1 << n,
                got: p.len(),
            });
        }
        if p.iter().any(|&x| !(x >= 0.0)) {
            return Err(domain("probabilities must be non-negative"));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(domain(format!("probabilities sum to {s}, not 1")));
        }
        Ok(Self { n, p, time: 0.0 })
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `⟨n_j⟩ = Σ_c p_c n_j(c)`.
    pub fn excitation(&self, j: usize) -> f64 {
        excitation(&self.p, j)
    }

    /// Advance in place under a fixed generator.
    pub fn propagate(&mut self, generator: &RateGenerator, duration: f64, dt: f64) -> Result<()> {
        if generator.n_atoms() != self.n {
            return Err(Error::Shape {
                expected: self.n,
                got: generator.n_atoms(),
            });
        }
        let plan = StepOptions::default()
            .with_dt(dt)
            .unchecked()
            .plan(duration)?;
        let mut rk = Rk4::<f64>::new(self.p.len());
        for _ in 0..plan.n_steps {
            rk.step(&mut self.p, plan.dt, |y, dy| generator.apply(y, dy));
        }
        self.time += plan.time(plan.n_steps);
        Ok(())
    }
}

fn excitation(p: &[f64], j: usize) -> f64 {
    p.iter()
        .enumerate()
        .filter(|&(c, _)| c >> j & 1 == 1)
        .map(|(_, &x)| x)
        .sum()
}

fn check_cap(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(domain("need at least one atom"));
    }
    if n > MAX_EXACT_ATOMS {
        return Err(Error::Capacity {
            engine: "exact classical engine",
            n,
            cap: MAX_EXACT_ATOMS,
        });
    }
    Ok(n)
}

/// RK4 integration of `dp/dt = G p`; the generator is rebuilt whenever the
/// detuning snapshot (sampled at step midpoints) changes.
pub fn evolve_classical_exact(
    network: &AtomNetwork,
    schedule: &DetuningSchedule,
    params: &SimParams,
    p0: &ProbabilityVector,
    t_end: f64,
    options: &StepOptions,
    observables: &Observables,
) -> Result<TimeSeries> {
    let n = network.len();
    if p0.n_atoms() != n {
        return Err(Error::Shape {
            expected: n,
            got: p0.n_atoms(),
        });
    }
    schedule.validate_for(network)?;
    observables.validate(n)?;
    let plan = options.plan(t_end)?;

    let mut detunings = schedule.snapshot(network, 0.5 * plan.dt);
    let mut generator = RateGenerator::build(network, params, &detunings)?;
    let mut series = TimeSeries::new("classical-exact", observables.sites.clone());
    let mut conservation = Conservation {
        min_population: f64::INFINITY,
        ..Conservation::default()
    };
    let mut p = p0.p.clone();
    let mut rk = Rk4::<f64>::new(p.len());
    let mut record = plan.record.iter().peekable();

    for step in 0..=plan.n_steps {
        if record.next_if_eq(&&step).is_some() {
            let t = plan.time(step);
            let drift = (p.iter().sum::<f64>() - 1.0).abs();
            if !(drift <= 1e-6) {
                return Err(Error::IntegrationFailure {
                    time: t,
                    reason: format!("normalization drifted by {drift:e}"),
                });
            }
            conservation = conservation.merge(Conservation {
                max_norm_drift: drift,
                max_hermiticity_error: 0.0,
                min_population: p.iter().copied().fold(f64::INFINITY, f64::min),
            });
            series.push(
                t,
                observables.sites.iter().map(|&j| excitation(&p, j)),
                observables.output.iter().map(|&j| excitation(&p, j)).sum(),
            );
        }
        if step == plan.n_steps {
            break;
        }
        if !schedule.is_empty() {
            let now = schedule.snapshot(network, plan.time(step) + 0.5 * plan.dt);
            if now != detunings {
                detunings = now;
                generator = RateGenerator::build(network, params, &detunings)?;
            }
        }
        rk.step(&mut p, plan.dt, |y, dy| generator.apply(y, dy));
    }
    series.meta.conservation = Some(conservation);
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(ProbabilityVector::from_probabilities(1, vec![0.5, 0.5]).is_ok());
        assert!(ProbabilityVector::from_probabilities(1, vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::from_probabilities(1, vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::from_probabilities(2, vec![1.0, 0.0]).is_err());
        let u = ProbabilityVector::uniform(3).unwrap();
        assert!((u.excitation(1) - 0.5).abs() < 1e-15);
    }
}
