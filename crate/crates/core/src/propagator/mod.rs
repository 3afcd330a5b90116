//! Time-dependent Schrödinger integration and the RWA comparison harness.

pub mod compare;
pub mod dopri;
pub mod schrodinger;

pub use compare::{compare_rwa, estimate_steps, fit_rabi, CompareOptions, ComparisonReport, RabiFit};
pub use dopri::{Renormalization, Stats, StepControl};
pub use schrodinger::{
    integrate, integrate_interaction, integrate_with, populations, uniform_times, InteractionFrame, SparseHamiltonian,
    Trajectory,
};
