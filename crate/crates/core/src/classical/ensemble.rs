use super::kmc::Trajectory;
use crate::error::{domain, Error, Result};
use crate::series::{Observables, TimeSeries};

/// Observables of one trajectory on `grid`, row-major per grid point:
/// recorded sites first, then `N_o`. Values are piecewise constant, taking
/// the state after every event at or before each grid time.
pub fn sample_trajectory(
    trajectory: &Trajectory,
    grid: &[f64],
    observables: &Observables,
) -> Result<Vec<f64>> {
    let n = trajectory.initial.len();
    observables.validate(n)?;
    check_grid(grid, trajectory.t_end)?;
    let mut is_output = vec![false; n];
    for &s in &observables.output {
        is_output[s] = true;
    }
    let mut bits = trajectory.initial.bits().to_vec();
    let mut n_out = observables.output.iter().filter(|&&s| bits[s]).count() as i64;
    let width = observables.sites.len() + 1;
    let mut out = Vec::with_capacity(grid.len() * width);
    let mut events = trajectory.events.iter().peekable();
    for &t in grid {
        while let Some(e) = events.next_if(|e| e.time <= t) {
            if bits[e.atom] != e.excited && is_output[e.atom] {
                n_out += if e.excited { 1 } else { -1 };
            }
            bits[e.atom] = e.excited;
        }
        out.extend(
            observables
                .sites
                .iter()
                .map(|&s| f64::from(u8::from(bits[s]))),
        );
        out.push(n_out as f64);
    }
    Ok(out)
}

fn check_grid(grid: &[f64], t_end: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Empty("time grid"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("time grid must be strictly increasing"));
    }
    if grid[0] < 0.0 || grid[grid.len() - 1] > t_end * (1.0 + 1e-12) {
        return Err(domain("time grid exceeds the trajectory span"));
    }
    Ok(())
}

/// Running mean and variance per grid point (Welford), mergeable across
/// workers.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleAccumulator {
    grid: Vec<f64>,
    observables: Observables,
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl EnsembleAccumulator {
    pub fn new(grid: Vec<f64>, observables: Observables) -> Self {
        let len = grid.len() * (observables.sites.len() + 1);
        Self {
            grid,
            observables,
            count: 0,
            mean: vec![0.0; len],
            m2: vec![0.0; len],
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn add(&mut self, trajectory: &Trajectory) -> Result<()> {
        let x = sample_trajectory(trajectory, &self.grid, &self.observables)?;
        self.add_sample(&x);
        Ok(())
    }

    pub(crate) fn add_sample(&mut self, x: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let d = v - *m;
            *m += d / n;
            *s += d * (v - *m);
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.observables != other.observables {
            return Err(domain("cannot merge ensembles on different grids"));
        }
        if other.count == 0 {
            return Ok(());
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += other.m2[i] + d * d * na * nb / n;
        }
        self.count += other.count;
        Ok(())
    }

    /// Merge samples taken on a different network with the same grid and
    /// recorded sites, such as another position instance of a gas; the
    /// output sets may differ.
    pub fn pool(&mut self, other: &Self) -> Result<()> {
        if self.observables.sites != other.observables.sites {
            return Err(domain("pooled ensembles must record the same sites"));
        }
        let observables = std::mem::replace(&mut self.observables, other.observables.clone());
        let merged = self.merge(other);
        self.observables = observables;
        merged
    }

    /// Mean series with standard errors `s / √M`.
    pub fn finish(&self) -> Result<TimeSeries> {
        if self.count == 0 {
            return Err(Error::Empty("trajectory ensemble"));
        }
        let m = self.count as f64;
        let stderr = |i: usize| {
            if self.count < 2 {
                0.0
            } else {
                (self.m2[i].max(0.0) / (m - 1.0) / m).sqrt()
            }
        };
        let width = self.observables.sites.len() + 1;
        let mut series = TimeSeries::new("kmc", self.observables.sites.clone());
        let mut out_err = Vec::with_capacity(self.grid.len());
        let mut site_err = vec![Vec::with_capacity(self.grid.len()); width - 1];
        for (g, &t) in self.grid.iter().enumerate() {
            let row = g * width;
            series.push(
                t,
                self.mean[row..row + width - 1].iter().copied(),
                self.mean[row + width - 1],
            );
            for (s, col) in site_err.iter_mut().enumerate() {
                col.push(stderr(row + s));
            }
            out_err.push(stderr(row + width - 1));
        }
        series.output_stderr = Some(out_err);
        series.site_stderr = Some(site_err);
        Ok(series)
    }
}

/// Mean and standard error over a set of trajectories.
pub fn ensemble_average(
    trajectories: &[Trajectory],
    grid: &[f64],
    observables: &Observables,
) -> Result<TimeSeries> {
    let first = trajectories
        .first()
        .ok_or(Error::Empty("trajectory ensemble"))?;
    let mut acc = EnsembleAccumulator::new(grid.to_vec(), observables.clone());
    for t in trajectories {
        if t.t_end != first.t_end || t.initial.len() != first.initial.len() {
            return Err(domain("trajectories must share network size and t_end"));
        }
        acc.add(t)?;
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::super::kmc::Event;
    use super::*;
    use crate::model::Configuration;

    fn constant(bits: &str) -> Trajectory {
        Trajectory {
            initial: bits.parse().unwrap(),
            events: vec![],
            t_end: 1.0,
        }
    }

    #[test]
    fn single_trajectory_has_zero_error() {
        let t = Trajectory {
            initial: Configuration::ground(2),
            events: vec![Event {
                time: 0.5,
                atom: 1,
                excited: true,
            }],
            t_end: 1.0,
        };
        let obs = Observables::all_sites(2, vec![1]);
        let s = ensemble_average(&[t], &[0.0, 0.5, 1.0], &obs).unwrap();
        assert_eq!(s.output, vec![0.0, 1.0, 1.0]);
        assert_eq!(s.site(0).unwrap(), &[0.0, 0.0, 0.0]);
        assert_eq!(s.output_stderr.unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn mirrored_pair_averages_to_half() {
        let obs = Observables::output_only(vec![1, 2, 3]);
        let s = ensemble_average(&[constant("0000"), constant("0111")], &[0.0, 1.0], &obs).unwrap();
        assert_eq!(s.output, vec![1.5, 1.5]);
    }

    #[test]
    fn merge_matches_sequential() {
        let obs = Observables::output_only(vec![0]);
        let grid = vec![0.0, 1.0];
        let trajs = [constant("1"), constant("0"), constant("1"), constant("1")];
        let whole = ensemble_average(&trajs, &grid, &obs).unwrap();
        let mut a = EnsembleAccumulator::new(grid.clone(), obs.clone());
        let mut b = EnsembleAccumulator::new(grid.clone(), obs.clone());
        a.add(&trajs[0]).unwrap();
        a.add(&trajs[1]).unwrap();
        b.add(&trajs[2]).unwrap();
        b.add(&trajs[3]).unwrap();
        a.merge(&b).unwrap();
        let merged = a.finish().unwrap();
        assert!((merged.output[0] - whole.output[0]).abs() < 1e-15);
        let (e1, e2) = (
            merged.output_stderr.unwrap()[0],
            whole.output_stderr.unwrap()[0],
        );
        assert!((e1 - e2).abs() < 1e-15);
        assert!((e2 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn empty_ensemble_is_an_error() {
        let obs = Observables::output_only(vec![0]);
        assert!(ensemble_average(&[], &[0.0], &obs).is_err());
    }
}
