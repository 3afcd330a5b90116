//! Brute-force integration of `i d/dt psi = H_L(t) psi` and the dressed interaction picture.

use super::dopri::{solve, Stats, StepControl};
use crate::bosonic::FockTruncation;
use crate::error::{invalid, Error, Result};
use crate::linalg::{cis, CMatrix, CVector, C64};
use crate::model::{DressedBasis, HamiltonianParts, ModelParams};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use serde::Serialize;

/// Sampled solution of the Schrödinger equation.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<CVector>,
    /// Max `| ||psi|| - 1 |` over the recorded states.
    pub norm_drift: f64,
    pub stats: Stats,
}

impl Trajectory {
    fn new(times: &[f64], states: Vec<CVector>, stats: Stats) -> Self {
        let norm_drift = states.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
        Self { times: times.to_vec(), states, norm_drift, stats }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &CVector {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// `n + 1` equally spaced times from `t0` to `t1`, both included exactly.
pub fn uniform_times(t0: f64, t1: f64, intervals: usize) -> Vec<f64> {
    let n = intervals.max(1);
    let mut v: Vec<f64> = (0..=n).map(|k| t0 + (t1 - t0) * k as f64 / n as f64).collect();
    v[n] = t1;
    v
}

fn to_csr(m: &CMatrix) -> CsrMatrix<C64> {
    let mut coo = CooMatrix::new(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                coo.push(i, j, v);
            }
        }
    }
    CsrMatrix::from(&coo)
}

/// `out += scale * a x`
fn csr_mul_add(a: &CsrMatrix<C64>, scale: C64, x: &CVector, out: &mut CVector) {
    for (i, row) in a.row_iter().enumerate() {
        let mut s = C64::new(0.0, 0.0);
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            s += v * x[j];
        }
        out[i] += scale * s;
    }
}

/// `H_L(t)` with the static part cached; only the drive prefactors change per stage.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    fixed: CsrMatrix<C64>,
    drives: Vec<CsrMatrix<C64>>,
    freqs: Vec<f64>,
    phases: Vec<f64>,
}

impl SparseHamiltonian {
    pub fn new(params: &ModelParams, trunc: FockTruncation) -> Result<Self> {
        let parts = HamiltonianParts::new(params, trunc)?;
        Ok(Self {
            fixed: to_csr(&(&parts.coupling + &parts.splitting)),
            drives: parts.drives.iter().map(to_csr).collect(),
            freqs: parts.drive_freqs,
            phases: parts.drive_phases,
        })
    }

    pub fn dim(&self) -> usize {
        self.fixed.nrows()
    }

    /// `out = -i H_L(t) psi`
    pub fn rhs(&self, t: f64, psi: &CVector, out: &mut CVector) {
        out.fill(C64::new(0.0, 0.0));
        let minus_i = C64::new(0.0, -1.0);
        csr_mul_add(&self.fixed, minus_i, psi, out);
        for (j, d) in self.drives.iter().enumerate() {
            let f = (self.freqs[j] * t + self.phases[j]).cos();
            csr_mul_add(d, minus_i * f, psi, out);
        }
    }
}

fn check_state(psi0: &CVector, dim: usize) -> Result<()> {
    if psi0.len() != dim {
        return Err(Error::Dimension { expected: dim, got: psi0.len() });
    }
    if (psi0.norm() - 1.0).abs() > 1e-12 {
        return Err(invalid("psi0", format!("initial state has norm {}", psi0.norm())));
    }
    Ok(())
}

/// Integrates `H_L` from `psi0` at `times[0]`, recording the state at every entry of `times`.
pub fn integrate(params: &ModelParams, trunc: FockTruncation, psi0: &CVector, times: &[f64], tol: f64) -> Result<Trajectory> {
    integrate_with(params, trunc, psi0, times, StepControl::adaptive(tol))
}

pub fn integrate_with(
    params: &ModelParams,
    trunc: FockTruncation,
    psi0: &CVector,
    times: &[f64],
    control: StepControl,
) -> Result<Trajectory> {
    params.require_heisenberg("integrate")?;
    let h = SparseHamiltonian::new(params, trunc)?;
    check_state(psi0, h.dim())?;
    let (states, stats) = solve(|t, y, dy| h.rhs(t, y, dy), psi0, times, control)?;
    Ok(Trajectory::new(times, states, stats))
}

/// Coordinates `c = (U_0(t) B)^dag psi` on the trusted dressed states, in which
/// `i dc/dt = (delta/2) H_F(t) c`.
#[derive(Debug, Clone)]
pub struct InteractionFrame {
    basis: DressedBasis,
    /// `B^dag (sum_j sigma_3^{(j)} (x) 1) B`
    sigma: CMatrix,
}

impl InteractionFrame {
    pub fn new(params: &ModelParams, trunc: FockTruncation) -> Result<Self> {
        let basis = DressedBasis::new(params, trunc)?;
        let m = params.m();
        let dim = trunc.dim();
        let b = basis.columns();
        let mut scaled = b.clone();
        for s in 0..1usize << m {
            let z: f64 = (0..m).map(|j| if (s >> (m - 1 - j)) & 1 == 0 { 1.0 } else { -1.0 }).sum();
            for k in 0..dim {
                for col in 0..b.ncols() {
                    scaled[(s * dim + k, col)] *= z;
                }
            }
        }
        let sigma = b.adjoint() * scaled;
        Ok(Self { basis, sigma })
    }

    pub fn basis(&self) -> &DressedBasis {
        &self.basis
    }

    pub fn to_frame(&self, t: f64, psi: &CVector) -> CVector {
        self.basis.phased_columns(t).adjoint() * psi
    }

    pub fn from_frame(&self, t: f64, c: &CVector) -> CVector {
        self.basis.phased_columns(t) * c
    }

    /// `out = -i (delta/2) H_F(t) c`, with `H_F = e^{i phi} S e^{-i phi}` elementwise.
    fn rhs(&self, t: f64, c: &CVector, out: &mut CVector) {
        let phases = self.basis.phases(t);
        let rotated = CVector::from_iterator(c.len(), c.iter().zip(&phases).map(|(v, p)| v * cis(-p)));
        let w = &self.sigma * rotated;
        let scale = C64::new(0.0, -0.5 * self.basis.params().delta);
        for (i, p) in phases.iter().enumerate() {
            out[i] = scale * cis(*p) * w[i];
        }
    }
}

/// Same dynamics as [`integrate`] by a second route: the interaction-picture equation on the
/// trusted dressed states, mapped back to the lab frame at each sample. `psi0` must lie in
/// their span.
pub fn integrate_interaction(
    params: &ModelParams,
    trunc: FockTruncation,
    psi0: &CVector,
    times: &[f64],
    control: StepControl,
) -> Result<Trajectory> {
    params.require_heisenberg("integrate_interaction")?;
    let frame = InteractionFrame::new(params, trunc)?;
    check_state(psi0, frame.basis.columns().nrows())?;
    let c0 = frame.to_frame(times[0], psi0);
    let outside = (psi0 - frame.from_frame(times[0], &c0)).norm();
    if outside > 1e-10 {
        return Err(invalid("psi0", format!("initial state leaves the trusted dressed span by {outside:.3e}")));
    }
    let (coords, stats) = solve(|t, y, dy| frame.rhs(t, y, dy), &c0, times, control)?;
    let states = times.iter().zip(&coords).map(|(&t, c)| frame.from_frame(t, c)).collect();
    Ok(Trajectory::new(times, states, stats))
}

/// `|<b_i|psi(t)>|^2` for each basis vector (outer index) and sample (inner index).
pub fn populations(traj: &Trajectory, basis: &[CVector]) -> Result<Vec<Vec<f64>>> {
    for b in basis {
        if (b.norm() - 1.0).abs() > 1e-10 {
            return Err(invalid("basis", format!("basis vector has norm {}", b.norm())));
        }
        if let Some(s) = traj.states.first() {
            if s.len() != b.len() {
                return Err(Error::Dimension { expected: s.len(), got: b.len() });
            }
        }
    }
    Ok(basis
        .iter()
        .map(|b| traj.states.iter().map(|s| b.dotc(s).norm_sqr()).collect())
        .collect())
}
