//! Full density-matrix evolution under the Lindblad master equation.
//!
//! States live on the `2^N` computational basis with atom `k` at bit `k`.
//! The Hamiltonian is kept as its diagonal (detunings plus pairwise van der
//! Waals energies) and the implicit single-flip drive, so one evaluation of
//! the generator costs `O(N·4^N)`.

mod density;
mod evolve;
mod hamiltonian;
mod lindblad;

pub use density::{measure_output, DensityMatrix};
pub use evolve::{evolve_quantum, evolve_quantum_with, StepOptions};
pub use hamiltonian::{Hamiltonian, MAX_QUANTUM_ATOMS};
pub use lindblad::lindblad_rhs;
