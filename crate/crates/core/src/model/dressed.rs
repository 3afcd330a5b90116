//! Eigenstates of `H_0` and its exact propagator.

use super::ModelParams;
use crate::bosonic::{displacement, FockTruncation};
use crate::error::Result;
use crate::linalg::{c, cis, CMatrix, CVector, RMatrix};
use crate::spin::{lambda_vector, SpinLabel};

/// `|lambda> (x) e^{-(Lambda x/2)(a^dag - a)} |n>`
#[derive(Debug, Clone)]
pub struct DressedState {
    pub label: SpinLabel,
    pub n: usize,
    pub vector: CVector,
}

/// `omega (n - x^2 Lambda^2 / 4)`
pub fn static_energy(label: &SpinLabel, n: usize, params: &ModelParams) -> f64 {
    let theta = label.total() as f64 * params.x() / 2.0;
    params.omega * (n as f64 - theta * theta)
}

/// `sum_j lambda_j (g2 / omega_j) sin(omega_j t + phi_j)`
pub fn drive_phase(label: &SpinLabel, params: &ModelParams, t: f64) -> f64 {
    label
        .lambdas()
        .iter()
        .zip(params.drive_freqs.iter().zip(&params.drive_phases))
        .map(|(&l, (&w, &phi))| l as f64 * params.g2 / w * (w * t + phi).sin())
        .sum()
}

/// Instantaneous eigenvalue `E_n(lambda) + g2 sum_j lambda_j cos(omega_j t + phi_j)`.
pub fn dressed_energy(label: &SpinLabel, n: usize, params: &ModelParams, t: f64) -> f64 {
    let drive: f64 = label
        .lambdas()
        .iter()
        .zip(params.drive_freqs.iter().zip(&params.drive_phases))
        .map(|(&l, (&w, &phi))| l as f64 * (w * t + phi).cos())
        .sum();
    static_energy(label, n, params) + params.g2 * drive
}

fn check_label(label: &SpinLabel, params: &ModelParams) -> Result<()> {
    if label.m() != params.m() {
        return Err(crate::error::Error::WrongAtomCount {
            operation: "dressed_state",
            expected: params.m(),
            got: label.m(),
        });
    }
    Ok(())
}

pub fn dressed_state(
    label: &SpinLabel,
    n: usize,
    params: &ModelParams,
    trunc: FockTruncation,
) -> Result<DressedState> {
    params.require_heisenberg("dressed_state")?;
    check_label(label, params)?;
    trunc.check_level(n)?;
    let theta = label.total() as f64 * params.x() / 2.0;
    let d = displacement(trunc, -theta)?;
    let boson = d.column(n).into_owned();
    let vector = lambda_vector(label).kronecker(&boson).map(c);
    Ok(DressedState { label: label.clone(), n, vector })
}

/// All dressed states with `n` below the buffer, as columns, label-major.
#[derive(Debug, Clone)]
pub struct DressedBasis {
    params: ModelParams,
    trunc: FockTruncation,
    labels: Vec<SpinLabel>,
    columns: CMatrix,
}

impl DressedBasis {
    pub fn new(params: &ModelParams, trunc: FockTruncation) -> Result<Self> {
        params.require_heisenberg("dressed_basis")?;
        let m = params.m();
        let labels = SpinLabel::all(m);
        let levels = trunc.trusted();
        let dim = trunc.dim();
        // one displacement per value of Lambda
        let mut cache: Vec<Option<RMatrix>> = vec![None; 2 * m + 1];
        let mut columns = CMatrix::zeros((1 << m) * dim, labels.len() * levels);
        for (li, label) in labels.iter().enumerate() {
            let key = (label.total() + m as i32) as usize;
            if cache[key].is_none() {
                cache[key] = Some(displacement(trunc, -(label.total() as f64) * params.x() / 2.0)?);
            }
            let disp = cache[key].as_ref().unwrap();
            let spin = lambda_vector(label);
            for n in 0..levels {
                let col = li * levels + n;
                for (s, &amp) in spin.iter().enumerate() {
                    for k in 0..dim {
                        columns[(s * dim + k, col)] = c(amp * disp[(k, n)]);
                    }
                }
            }
        }
        Ok(Self { params: params.clone(), trunc, labels, columns })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn truncation(&self) -> FockTruncation {
        self.trunc
    }

    pub fn labels(&self) -> &[SpinLabel] {
        &self.labels
    }

    pub fn levels(&self) -> usize {
        self.trunc.trusted()
    }

    pub fn len(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Column index of `(label index, n)`.
    pub fn index(&self, label_index: usize, n: usize) -> usize {
        label_index * self.levels() + n
    }

    /// `(label, n)` of a column.
    pub fn entry(&self, col: usize) -> (&SpinLabel, usize) {
        (&self.labels[col / self.levels()], col % self.levels())
    }

    /// Basis vectors as columns of a `(2^m dim) x (2^m levels)` matrix.
    pub fn columns(&self) -> &CMatrix {
        &self.columns
    }

    pub fn vector(&self, col: usize) -> CVector {
        self.columns.column(col).into_owned()
    }

    /// Phases `t E_n(lambda) + sum_j lambda_j (g2/omega_j) sin(omega_j t + phi_j)` per column.
    pub fn phases(&self, t: f64) -> Vec<f64> {
        (0..self.len())
            .map(|col| {
                let (label, n) = self.entry(col);
                t * static_energy(label, n, &self.params) + drive_phase(label, &self.params, t)
            })
            .collect()
    }

    pub fn energies(&self, t: f64) -> Vec<f64> {
        (0..self.len())
            .map(|col| {
                let (label, n) = self.entry(col);
                dressed_energy(label, n, &self.params, t)
            })
            .collect()
    }

    /// `U_0(t) = sum e^{-i phase} |d><d|` over the trusted dressed states.
    pub fn u0(&self, t: f64) -> CMatrix {
        let phased = self.phased_columns(t);
        phased * self.columns.adjoint()
    }

    /// Columns of `U_0(t) B`, i.e. `e^{-i phase} |d>`.
    pub fn phased_columns(&self, t: f64) -> CMatrix {
        let mut out = self.columns.clone();
        for (col, ph) in self.phases(t).into_iter().enumerate() {
            let z = cis(-ph);
            for v in out.column_mut(col).iter_mut() {
                *v *= z;
            }
        }
        out
    }

    /// `sum_d E_d(t) |d><d|`
    pub fn h0_reconstruction(&self, t: f64) -> CMatrix {
        let mut weighted = self.columns.clone();
        for (col, e) in self.energies(t).into_iter().enumerate() {
            for v in weighted.column_mut(col).iter_mut() {
                *v *= e;
            }
        }
        weighted * self.columns.adjoint()
    }
}

/// Exact propagator of `H_0` restricted to the trusted dressed states.
pub fn u0(params: &ModelParams, trunc: FockTruncation, t: f64) -> Result<CMatrix> {
    Ok(DressedBasis::new(params, trunc)?.u0(t))
}
