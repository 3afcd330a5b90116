//! Two-level solver, frame-reduced cat equations, resonance condition and the RWA gate.

pub mod block;
pub mod gate;
pub mod resonance;
pub mod two_level;

pub use block::{block_equations_rhs, un_vn, BlockSystem};
pub use gate::{averaged_propagator, effective_generator, gate_unitary, rwa_reduce, Channel, RwaGate};
pub use resonance::{resonance_residual, solve_resonance, Branch, ResonanceSearch, ResonanceSolution, ResonanceTarget};
pub use two_level::{appendix_propagator, q_of_t, spectral_decompose, TwoLevelSpectral};
