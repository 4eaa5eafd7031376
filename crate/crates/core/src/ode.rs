//! Fixed-step classical Runge-Kutta and the step/recording plan shared by
//! the dense engines.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::series::{uniform_grid, DEFAULT_SAMPLES};

/// Scratch buffers for in-place RK4 steps on a flat state vector.
pub(crate) struct Rk4<T> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    tmp: Vec<T>,
}

impl<T> Rk4<T>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
{
    pub(crate) fn new(len: usize) -> Self {
        Self {
            k1: vec![T::default(); len],
            k2: vec![T::default(); len],
            k3: vec![T::default(); len],
            k4: vec![T::default(); len],
            tmp: vec![T::default(); len],
        }
    }

    /// Advance `y` by `dt` for the autonomous system `f(y, dy)`.
    pub(crate) fn step(&mut self, y: &mut [T], dt: f64, mut f: impl FnMut(&[T], &mut [T])) {
        let h2 = 0.5 * dt;
        f(y, &mut self.k1);
        for ((t, &y), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *t = y + k * h2;
        }
        f(&self.tmp, &mut self.k2);
        for ((t, &y), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *t = y + k * h2;
        }
        f(&self.tmp, &mut self.k3);
        for ((t, &y), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *t = y + k * dt;
        }
        f(&self.tmp, &mut self.k4);
        let h6 = dt / 6.0;
        for (i, y) in y.iter_mut().enumerate() {
            let incr = self.k1[i] + self.k2[i] * 2.0 + self.k3[i] * 2.0 + self.k4[i];
            *y = *y + incr * h6;
        }
    }
}

/// Fixed step size and recording density of a dense-engine run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOptions {
    pub dt: f64,
    pub samples: usize,
    /// Upper bound enforced on `dt`; `None` disables the check.
    pub max_dt: Option<f64>,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self::for_omega(1.0)
    }
}

impl StepOptions {
    /// `dt = 0.005/Ω`, capped at `0.01/Ω`.
    pub fn for_omega(omega: f64) -> Self {
        Self {
            dt: 0.005 / omega,
            samples: DEFAULT_SAMPLES,
            max_dt: Some(0.01 / omega),
        }
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        Self { samples, ..self }
    }

    /// Drop the step-size cap (used to demonstrate failing oracles).
    pub fn unchecked(self) -> Self {
        Self {
            max_dt: None,
            ..self
        }
    }

    /// Step size that divides `window` into a whole number of steps close
    /// to `self.dt`.
    pub fn aligned_to(self, window: f64) -> Self {
        let steps = (window / self.dt).round().max(1.0);
        Self {
            dt: window / steps,
            ..self
        }
    }

    pub(crate) fn plan(&self, t_end: f64) -> Result<StepPlan> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(domain(format!("step must be positive, got {}", self.dt)));
        }
        if let Some(max) = self.max_dt {
            if self.dt > max * (1.0 + 1e-12) {
                return Err(domain(format!(
                    "step {} exceeds the limit {max}; lower dt",
                    self.dt
                )));
            }
        }
        let ratio = t_end / self.dt;
        let n_steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
            ratio.round()
        } else {
            ratio.ceil()
        } as usize;
        let mut record: Vec<usize> = uniform_grid(t_end, self.samples)?
            .into_iter()
            .map(|t| ((t / self.dt).round() as usize).min(n_steps))
            .collect();
        record.dedup();
        Ok(StepPlan {
            dt: self.dt,
            n_steps,
            record,
        })
    }
}

pub(crate) struct StepPlan {
    pub dt: f64,
    pub n_steps: usize,
    /// Step indices at which the state is recorded, increasing.
    pub record: Vec<usize>,
}

impl StepPlan {
    pub(crate) fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}
