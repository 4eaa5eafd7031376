use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ensemble::EnsembleAccumulator;
use super::neighbors::NeighborTable;
use super::rates::rate_from_mismatch;
use super::sum_tree::SumTree;
use crate::error::{domain, Error, Result};
use crate::model::{AtomNetwork, Configuration, DetuningSchedule, SimParams};
use crate::rng::{stream_rng, trajectory_stream};
use crate::series::Observables;

/// One flip: atom `atom` enters the Rydberg state (`excited`) or leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub atom: usize,
    pub excited: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub initial: Configuration,
    pub events: Vec<Event>,
    pub t_end: f64,
}

impl Trajectory {
    pub fn final_configuration(&self) -> Configuration {
        let mut c = self.initial.clone();
        for e in &self.events {
            c.set(e.atom, e.excited);
        }
        c
    }

    /// Event times strictly increase and every event flips its atom.
    pub fn validate(&self) -> Result<()> {
        let mut c = self.initial.clone();
        let mut last = f64::NEG_INFINITY;
        for e in &self.events {
            if !(e.time > last) || e.time > self.t_end {
                return Err(domain(format!("event time {} out of order", e.time)));
            }
            if e.atom >= c.len() || c.is_excited(e.atom) == e.excited {
                return Err(domain(format!(
                    "event at {} does not flip atom {}",
                    e.time, e.atom
                )));
            }
            c.set(e.atom, e.excited);
            last = e.time;
        }
        Ok(())
    }
}

/// Immutable inputs shared by all trajectories of an ensemble.
#[derive(Debug, Clone, Copy)]
pub struct KmcSystem<'a> {
    network: &'a AtomNetwork,
    table: &'a NeighborTable,
    params: SimParams,
    schedule: &'a DetuningSchedule,
}

impl<'a> KmcSystem<'a> {
    pub fn new(
        network: &'a AtomNetwork,
        table: &'a NeighborTable,
        params: SimParams,
        schedule: &'a DetuningSchedule,
    ) -> Result<Self> {
        if !(params.gamma() > 0.0) {
            return Err(domain("rate equations need a positive dephasing rate"));
        }
        if table.len() != network.len() {
            return Err(Error::Shape {
                expected: network.len(),
                got: table.len(),
            });
        }
        schedule.validate_for(network)?;
        Ok(Self {
            network,
            table,
            params,
            schedule,
        })
    }

    pub fn network(&self) -> &AtomNetwork {
        self.network
    }

    /// Direct-method Gillespie run from `config0` to `t_end`.
    ///
    /// Waiting times are capped at the next schedule breakpoint and resampled
    /// there; rates change only at events and breakpoints, so the sampling is
    /// exact. After an event at atom `k` only `k` and its table neighbors are
    /// re-rated.
    pub fn run(
        &self,
        config0: &Configuration,
        t_end: f64,
        rng: &mut impl Rng,
    ) -> Result<Trajectory> {
        let n = self.network.len();
        if config0.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: config0.len(),
            });
        }
        if !(t_end > 0.0) {
            return Err(domain(format!("t_end must be positive, got {t_end}")));
        }
        let (omega, gamma, kappa) = (
            self.params.omega(),
            self.params.gamma(),
            self.params.kappa(),
        );
        let mut bits = config0.bits().to_vec();
        let mut detunings = self.schedule.snapshot(self.network, 0.0);
        let mut shift = vec![0.0; n];
        let mut excited_neighbors = vec![0u32; n];
        for k in (0..n).filter(|&k| bits[k]) {
            for (j, v) in self.table.neighbors(k) {
                shift[j] += v;
                excited_neighbors[j] += 1;
            }
        }
        let rate = |k: usize, bits: &[bool], detunings: &[f64], shift: &[f64]| {
            rate_from_mismatch(detunings[k] + shift[k], omega, gamma)
                + if bits[k] { kappa } else { 0.0 }
        };
        let weights: Vec<f64> = (0..n).map(|k| rate(k, &bits, &detunings, &shift)).collect();
        let mut tree = SumTree::new(&weights);

        let mut events = Vec::new();
        let mut t = 0.0;
        let mut next_change = self.schedule.next_breakpoint(0.0).unwrap_or(f64::INFINITY);
        loop {
            let stop = next_change.min(t_end);
            let total = tree.total();
            if !(total > 0.0 && total.is_finite()) {
                return Err(Error::ZeroRate(t));
            }
            let wait: f64 = rng.sample::<f64, _>(Exp1) / total;
            if t + wait >= stop {
                t = stop;
                if stop >= t_end {
                    break;
                }
                let now = self.schedule.snapshot(self.network, t);
                for k in self.schedule.atoms_changing_at(t) {
                    tree.set(k, rate(k, &bits, &now, &shift));
                }
                detunings = now;
                next_change = self.schedule.next_breakpoint(t).unwrap_or(f64::INFINITY);
                continue;
            }
            t += wait;
            let k = tree.search(rng.random::<f64>() * total);
            bits[k] = !bits[k];
            for (j, v) in self.table.neighbors(k) {
                if bits[k] {
                    shift[j] += v;
                    excited_neighbors[j] += 1;
                } else {
                    excited_neighbors[j] -= 1;
                    // Reset exactly so round-off cannot accumulate.
                    shift[j] = if excited_neighbors[j] == 0 {
                        0.0
                    } else {
                        shift[j] - v
                    };
                }
                tree.set(j, rate(j, &bits, &detunings, &shift));
            }
            tree.set(k, rate(k, &bits, &detunings, &shift));
            events.push(Event {
                time: t,
                atom: k,
                excited: bits[k],
            });
        }
        Ok(Trajectory {
            initial: config0.clone(),
            events,
            t_end,
        })
    }

    /// [`run`](Self::run) with the generator for `(seed, stream)`.
    pub fn run_seeded(
        &self,
        config0: &Configuration,
        t_end: f64,
        seed: u64,
        stream: u64,
    ) -> Result<Trajectory> {
        self.run(config0, t_end, &mut stream_rng(seed, stream))
    }
}

/// Trajectories per work item; fixed so reductions do not depend on the
/// thread count.
const CHUNK: usize = 32;

/// Run `count` trajectories (streams `trajectory_stream(instance, i)`) in the
/// global work pool and reduce them onto `grid`.
///
/// The reduction order is fixed by trajectory index, so results are
/// bit-identical regardless of scheduling.
#[allow(clippy::too_many_arguments)]
pub fn run_kmc_ensemble(
    system: &KmcSystem<'_>,
    config0: &Configuration,
    t_end: f64,
    grid: &[f64],
    observables: &Observables,
    seed: u64,
    instance: u64,
    count: usize,
) -> Result<EnsembleAccumulator> {
    if count == 0 {
        return Err(Error::Empty("trajectory ensemble"));
    }
    observables.validate(system.network.len())?;
    let chunks: Vec<Result<EnsembleAccumulator>> = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = EnsembleAccumulator::new(grid.to_vec(), observables.clone());
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let stream = trajectory_stream(instance, i as u64);
                let traj = system.run_seeded(config0, t_end, seed, stream)?;
                acc.add(&traj)?;
            }
            Ok(acc)
        })
        .collect();
    let mut chunks = chunks.into_iter();
    let mut total = chunks.next().expect("count > 0")?;
    for c in chunks {
        total.merge(&c?)?;
    }
    Ok(total)
}
