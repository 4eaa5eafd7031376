//! Strong-dephasing rate-equation engine.
//!
//! In this limit every atom flips independently at the Lorentzian rate
//! `Γ_k = Ω²γ / ((γ/2)² + m_k²)`, where `m_k` is its local mismatch, and
//! excited atoms additionally decay at rate κ. Small networks are propagated
//! exactly on the `2^N` probability vector; large gases are sampled with an
//! event-driven Gillespie algorithm.

mod ensemble;
mod exact;
mod kmc;
mod neighbors;
mod rates;
mod sum_tree;

pub use ensemble::{ensemble_average, sample_trajectory, EnsembleAccumulator};
pub use exact::{evolve_classical_exact, ProbabilityVector};
pub use kmc::{run_kmc_ensemble, Event, KmcSystem, Trajectory};
pub use neighbors::NeighborTable;
pub use rates::{rate_from_mismatch, transition_rate, RateGenerator, MAX_EXACT_ATOMS};
