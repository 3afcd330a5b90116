//! Model parameters, Hamiltonians, algebra representations and the dressed basis.

pub mod algebra;
pub mod dressed;
pub mod hamiltonian;

pub use algebra::{key_formula, key_formula_residual, AlgebraRep, Generators, KeyFormula};
pub use dressed::{dressed_energy, dressed_state, u0, DressedBasis, DressedState};
pub use hamiltonian::{build_h0, build_hl, build_hl_with, HamiltonianParts};

use crate::error::{invalid, Error, Result};
use crate::spin::MAX_ATOMS;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Default strong-coupling threshold on `g1 / |delta|`.
pub const DEFAULT_STRONG_RATIO: f64 = 10.0;

/// Algebra generated by the bosonic operators: Heisenberg (N), su(1,1) (K) or su(2) (J).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algebra {
    N,
    K,
    J,
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(Algebra::N),
            "K" | "k" => Ok(Algebra::K),
            "J" | "j" => Ok(Algebra::J),
            _ => Err(invalid("algebra", format!("unknown algebra `{s}` (expected N, K or J)"))),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algebra::N => "N",
            Algebra::K => "K",
            Algebra::J => "J",
        };
        f.write_str(s)
    }
}

/// Physical constants of the driven atoms-plus-cavity model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    pub omega: f64,
    pub g1: f64,
    pub g2: f64,
    pub delta: f64,
    /// One drive frequency per atom.
    pub drive_freqs: Vec<f64>,
    pub drive_phases: Vec<f64>,
    pub algebra: Algebra,
    /// `g1 / |delta|` at or above which the model counts as strongly coupled.
    pub strong_ratio: f64,
}

impl ModelParams {
    /// Heisenberg-algebra model with zero drive phases.
    pub fn new(omega: f64, g1: f64, g2: f64, delta: f64, drive_freqs: Vec<f64>) -> Result<Self> {
        let m = drive_freqs.len();
        let params = Self {
            omega,
            g1,
            g2,
            delta,
            drive_freqs,
            drive_phases: vec![0.0; m],
            algebra: Algebra::N,
            strong_ratio: DEFAULT_STRONG_RATIO,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        self.drive_phases = phases;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.drive_freqs.len();
        if m == 0 || m > MAX_ATOMS {
            return Err(Error::AtomCount(m));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid("omega", "must be positive"));
        }
        if !(self.g1.is_finite() && self.g1 >= 0.0) {
            return Err(invalid("g1", "must be non-negative"));
        }
        if !(self.g2.is_finite() && self.g2 >= 0.0) {
            return Err(invalid("g2", "must be non-negative"));
        }
        if !self.delta.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        if self.drive_freqs.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid("drive_freqs", "every drive frequency must be positive"));
        }
        if self.drive_phases.len() != m {
            return Err(invalid(
                "drive_phases",
                format!("expected {m} phases, got {}", self.drive_phases.len()),
            ));
        }
        if self.drive_phases.iter().any(|p| !p.is_finite()) {
            return Err(invalid("drive_phases", "must be finite"));
        }
        if !(self.strong_ratio > 0.0) {
            return Err(invalid("strong_ratio", "must be positive"));
        }
        Ok(())
    }

    /// Number of atoms.
    pub fn m(&self) -> usize {
        self.drive_freqs.len()
    }

    /// `x = 2 g1 / omega`
    pub fn x(&self) -> f64 {
        2.0 * self.g1 / self.omega
    }

    /// `gamma = omega x^2`
    pub fn gamma(&self) -> f64 {
        self.omega * self.x() * self.x()
    }

    /// Largest dressed-state displacement `m x / 2`.
    pub fn theta_max(&self) -> f64 {
        self.m() as f64 * self.x() / 2.0
    }

    /// `Gamma_j = 2 g2 / omega_j`
    pub fn bessel_argument(&self, site: usize) -> f64 {
        2.0 * self.g2 / self.drive_freqs[site]
    }

    pub fn coupling_ratio(&self) -> f64 {
        if self.delta == 0.0 {
            f64::INFINITY
        } else {
            self.g1 / self.delta.abs()
        }
    }

    pub fn is_strong_coupling(&self) -> bool {
        self.coupling_ratio() >= self.strong_ratio
    }

    pub fn require_strong_coupling(&self) -> Result<()> {
        if !self.is_strong_coupling() {
            return Err(Error::RegimeViolation {
                ratio: self.coupling_ratio(),
                threshold: self.strong_ratio,
            });
        }
        Ok(())
    }

    /// Copy with drive `site` retuned.
    pub fn with_drive_freq(&self, site: usize, freq: f64) -> Self {
        let mut p = self.clone();
        p.drive_freqs[site] = freq;
        p
    }

    pub fn require_heisenberg(&self, operation: &'static str) -> Result<()> {
        if self.algebra != Algebra::N {
            return Err(Error::UnsupportedAlgebra { operation });
        }
        Ok(())
    }

    pub fn require_atoms(&self, operation: &'static str, expected: usize) -> Result<()> {
        if self.m() != expected {
            return Err(Error::WrongAtomCount { operation, expected, got: self.m() });
        }
        Ok(())
    }
}
