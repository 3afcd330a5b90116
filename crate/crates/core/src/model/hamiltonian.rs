use super::{Generators, ModelParams};
use crate::bosonic::{ladder_operators, FockTruncation};
use crate::error::Result;
use crate::linalg::{c, to_complex, CMatrix, RMatrix};
use crate::spin::{pauli_embedded, pauli_sum, PauliAxis};

/// Time-independent pieces and drive operators of `H_L`, spin factor first.
#[derive(Debug, Clone)]
pub struct HamiltonianParts {
    /// `omega 1 (x) L3 + g1 sum_j sigma_1^{(j)} (x) (L+ + L-)`
    pub coupling: CMatrix,
    /// `(delta/2) sum_j sigma_3^{(j)} (x) 1`
    pub splitting: CMatrix,
    /// `g2 sigma_1^{(j)} (x) 1`, one per atom
    pub drives: Vec<CMatrix>,
    pub drive_freqs: Vec<f64>,
    pub drive_phases: Vec<f64>,
}

impl HamiltonianParts {
    /// Heisenberg-algebra parts on the truncated Fock space.
    pub fn new(params: &ModelParams, trunc: FockTruncation) -> Result<Self> {
        params.require_heisenberg("build_hl")?;
        let l = ladder_operators(trunc);
        let gens = Generators {
            raise: l.a_dagger,
            lower: l.a,
            cartan: l.number,
            trusted: trunc.trusted(),
        };
        Self::with_generators(params, &gens)
    }

    /// Parts for an arbitrary representation of the algebra (static identity checks).
    pub fn with_generators(params: &ModelParams, gens: &Generators) -> Result<Self> {
        params.validate()?;
        let m = params.m();
        let dim = gens.cartan.nrows();
        let spin_id = RMatrix::identity(1 << m, 1 << m);
        let boson_id = RMatrix::identity(dim, dim);
        let quad = &gens.raise + &gens.lower;
        let coupling = spin_id.kronecker(&gens.cartan) * params.omega
            + pauli_sum(m, PauliAxis::X)?.kronecker(&quad) * params.g1;
        let splitting = pauli_sum(m, PauliAxis::Z)?.kronecker(&boson_id) * (params.delta / 2.0);
        let drives = (0..m)
            .map(|j| Ok(to_complex(&(pauli_embedded(m, PauliAxis::X, j)?.kronecker(&boson_id) * params.g2))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            coupling: to_complex(&coupling),
            splitting: to_complex(&splitting),
            drives,
            drive_freqs: params.drive_freqs.clone(),
            drive_phases: params.drive_phases.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coupling.nrows()
    }

    /// `cos(omega_j t + phi_j)`
    pub fn drive_factor(&self, site: usize, t: f64) -> f64 {
        (self.drive_freqs[site] * t + self.drive_phases[site]).cos()
    }

    pub fn h0(&self, t: f64) -> CMatrix {
        let mut h = self.coupling.clone();
        for (j, d) in self.drives.iter().enumerate() {
            h += d * c(self.drive_factor(j, t));
        }
        h
    }

    pub fn hl(&self, t: f64) -> CMatrix {
        self.h0(t) + &self.splitting
    }
}

/// Full Hamiltonian `H_L(t)` (Heisenberg algebra).
pub fn build_hl(params: &ModelParams, trunc: FockTruncation, t: f64) -> Result<CMatrix> {
    Ok(HamiltonianParts::new(params, trunc)?.hl(t))
}

/// `H_0(t) = H_L(t) - (delta/2) sum_j sigma_3^{(j)} (x) 1`.
pub fn build_h0(params: &ModelParams, trunc: FockTruncation, t: f64) -> Result<CMatrix> {
    Ok(HamiltonianParts::new(params, trunc)?.h0(t))
}

/// `H_L(t)` built on explicit generators; `params.algebra` must match the representation.
pub fn build_hl_with(params: &ModelParams, gens: &Generators, t: f64) -> Result<CMatrix> {
    Ok(HamiltonianParts::with_generators(params, gens)?.hl(t))
}
