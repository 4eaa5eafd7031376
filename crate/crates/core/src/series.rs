//! Recorded observables on a time grid.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of recorded samples used by the runners unless overridden.
pub const DEFAULT_SAMPLES: usize = 200;

/// `n` evenly spaced instants on `[0, t_end]`, endpoints included.
pub fn uniform_grid(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {n}")));
    }
    let step = t_end / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { t_end } else { i as f64 * step })
        .collect())
}

/// Which observables an engine records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observables {
    /// Sites whose excitation density is recorded individually.
    pub sites: Vec<usize>,
    /// Sites summed into the output count `N_o`.
    pub output: Vec<usize>,
}

impl Observables {
    /// Every site recorded, plus the given output set.
    pub fn all_sites(n: usize, output: Vec<usize>) -> Self {
        Self {
            sites: (0..n).collect(),
            output,
        }
    }

    pub fn output_only(output: Vec<usize>) -> Self {
        Self {
            sites: Vec::new(),
            output,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.sites.iter().chain(&self.output).find(|&&s| s >= n) {
            Some(&s) => Err(Error::Domain(format!(
                "observable site {s} out of range for {n} atoms"
            ))),
            None => Ok(()),
        }
    }
}

/// Worst-case conservation figures seen over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Conservation {
    /// `max |Tr ρ - 1|` or `max |Σ p - 1|`.
    pub max_norm_drift: f64,
    /// `max |ρ - ρ†|` elementwise; zero for classical engines.
    pub max_hermiticity_error: f64,
    /// Smallest diagonal entry / probability seen.
    pub min_population: f64,
}

impl Conservation {
    pub fn merge(self, other: Self) -> Self {
        Self {
            max_norm_drift: self.max_norm_drift.max(other.max_norm_drift),
            max_hermiticity_error: self.max_hermiticity_error.max(other.max_hermiticity_error),
            min_population: self.min_population.min(other.min_population),
        }
    }

    /// Holds the quantum bounds (trace, Hermiticity, positivity to 1e-8).
    pub fn quantum_ok(&self) -> bool {
        self.max_norm_drift < 1e-8
            && self.max_hermiticity_error < 1e-8
            && self.min_population >= -1e-8
    }

    /// Holds the probability-vector bounds (entries ≥ -1e-10, drift < 1e-9).
    pub fn classical_ok(&self) -> bool {
        self.max_norm_drift < 1e-9 && self.min_population >= -1e-10
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub engine: String,
    pub config_hash: Option<String>,
    pub seed: Option<u64>,
    pub code_version: String,
    pub conservation: Option<Conservation>,
}

/// Per-time observables: recorded site densities and the output count `N_o`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub site_indices: Vec<usize>,
    /// `site_values[s][i]` is the density of `site_indices[s]` at `times[i]`.
    pub site_values: Vec<Vec<f64>>,
    pub output: Vec<f64>,
    pub output_stderr: Option<Vec<f64>>,
    /// Standard errors of the site densities, for sampled ensembles.
    #[serde(default)]
    pub site_stderr: Option<Vec<Vec<f64>>>,
    pub meta: SeriesMeta,
}

impl TimeSeries {
    pub fn new(engine: &str, site_indices: Vec<usize>) -> Self {
        let site_values = vec![Vec::new(); site_indices.len()];
        Self {
            times: Vec::new(),
            site_indices,
            site_values,
            output: Vec::new(),
            output_stderr: None,
            site_stderr: None,
            meta: SeriesMeta {
                engine: engine.to_string(),
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                ..SeriesMeta::default()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub(crate) fn push(&mut self, t: f64, sites: impl IntoIterator<Item = f64>, output: f64) {
        self.times.push(t);
        let mut n = 0;
        for (col, v) in self.site_values.iter_mut().zip(sites) {
            col.push(v);
            n += 1;
        }
        debug_assert_eq!(n, self.site_values.len());
        self.output.push(output);
    }

    /// Density series of one site, if recorded.
    pub fn site(&self, site: usize) -> Option<&[f64]> {
        self.site_indices
            .iter()
            .position(|&s| s == site)
            .map(|i| self.site_values[i].as_slice())
    }

    /// Checks equal column lengths and strictly increasing times.
    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        let lengths_ok = self.output.len() == n
            && self.site_values.iter().all(|c| c.len() == n)
            && self.output_stderr.as_ref().is_none_or(|e| e.len() == n);
        if !lengths_ok {
            return Err(Error::Shape {
                expected: n,
                got: self.output.len(),
            });
        }
        if self.times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("times must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Linear interpolation of `N_o` at `t`.
    pub fn output_at(&self, t: f64) -> Result<f64> {
        interpolate(&self.times, &self.output, t)
    }

    /// Mean of `N_o` over the final `fraction` of the time range.
    pub fn plateau(&self, fraction: f64) -> Result<f64> {
        let (&t0, &t1) = match (self.times.first(), self.times.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Empty("time series")),
        };
        let cut = t1 - fraction * (t1 - t0);
        let tail: Vec<f64> = self
            .times
            .iter()
            .zip(&self.output)
            .filter(|(&t, _)| t >= cut)
            .map(|(_, &v)| v)
            .collect();
        Ok(tail.iter().sum::<f64>() / tail.len() as f64)
    }

    /// Largest absolute difference between two equally gridded series over
    /// sites recorded in both, restricted to `t <= t_max`.
    pub fn max_site_difference(&self, other: &TimeSeries, t_max: f64) -> Result<f64> {
        if self.times.len() != other.times.len() {
            return Err(Error::Shape {
                expected: self.times.len(),
                got: other.times.len(),
            });
        }
        let mut worst = 0.0f64;
        for (s, col) in self.site_indices.iter().zip(&self.site_values) {
            let Some(other_col) = other.site(*s) else {
                continue;
            };
            for ((t, a), b) in self.times.iter().zip(col).zip(other_col) {
                if *t <= t_max {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        Ok(worst)
    }

    /// CSV body: header `t,site_0,...,N_o[,N_o_stderr]`, values printed with
    /// nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for s in &self.site_indices {
            let _ = write!(out, ",site_{s}");
        }
        out.push_str(",N_o");
        if self.output_stderr.is_some() {
            out.push_str(",N_o_stderr");
        }
        out.push('\n');
        for i in 0..self.times.len() {
            out.push_str(&fmt_sig(self.times[i]));
            for col in &self.site_values {
                out.push(',');
                out.push_str(&fmt_sig(col[i]));
            }
            out.push(',');
            out.push_str(&fmt_sig(self.output[i]));
            if let Some(e) = &self.output_stderr {
                out.push(',');
                out.push_str(&fmt_sig(e[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Nine significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.8e}")
}

/// Piecewise-linear interpolation on a strictly increasing grid.
pub fn interpolate(times: &[f64], values: &[f64], t: f64) -> Result<f64> {
    let (Some(&t0), Some(&t1)) = (times.first(), times.last()) else {
        return Err(Error::Empty("time series"));
    };
    if !(t >= t0 && t <= t1) {
        return Err(Error::OutOfRange {
            what: "readout time",
            value: t,
            lo: t0,
            hi: t1,
        });
    }
    let i = times.partition_point(|&x| x <= t);
    if i == times.len() {
        return Ok(values[times.len() - 1]);
    }
    let (ta, tb) = (times[i - 1], times[i]);
    let w = (t - ta) / (tb - ta);
    Ok(values[i - 1] * (1.0 - w) + values[i] * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let g = uniform_grid(8.0, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[199], 8.0);
        assert!(uniform_grid(0.0, 10).is_err());
        assert!(uniform_grid(1.0, 1).is_err());
    }

    #[test]
    fn interpolation_and_range() {
        let t = [0.0, 1.0, 2.0];
        let v = [0.0, 1.0, 3.0];
        assert_eq!(interpolate(&t, &v, 1.5).unwrap(), 2.0);
        assert_eq!(interpolate(&t, &v, 2.0).unwrap(), 3.0);
        assert_eq!(interpolate(&t, &v, 0.0).unwrap(), 0.0);
        assert!(interpolate(&t, &v, 2.1).is_err());
        assert!(interpolate(&[], &[], 0.0).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut s = TimeSeries::new("test", vec![0, 1]);
        s.push(0.0, [1.0, 0.0], 0.0);
        s.push(0.5, [0.25, 0.125], 0.125);
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,site_0,site_1,N_o"));
        assert_eq!(
            lines.next(),
            Some("0.00000000e0,1.00000000e0,0.00000000e0,0.00000000e0")
        );
        assert_eq!(
            lines.next(),
            Some("5.00000000e-1,2.50000000e-1,1.25000000e-1,1.25000000e-1")
        );
        s.validate().unwrap();
    }

    #[test]
    fn plateau_averages_tail() {
        let mut s = TimeSeries::new("test", vec![]);
        for i in 0..=10 {
            s.push(i as f64, [], if i >= 9 { 2.0 } else { 0.0 });
        }
        assert_eq!(s.plateau(0.1).unwrap(), 2.0);
    }
}
