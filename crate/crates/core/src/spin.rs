//! Pauli operators on a register of `m` two-level atoms and the sigma_1 eigenbasis.

use crate::error::{Error, Result};
use crate::linalg::RMatrix;
use nalgebra::DVector;
use serde::Serialize;
use std::fmt;

pub const MAX_ATOMS: usize = 6;

/// Eigenvalues `lambda_j = +-1` of `sigma_1^{(j)}`, site 0 first.
///
/// Labels are indexed in binary with `+1 -> 0`, `-1 -> 1` and site 0 as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SpinLabel {
    lambdas: Vec<i8>,
}

impl SpinLabel {
    pub fn new(lambdas: Vec<i8>) -> Result<Self> {
        check_atoms(lambdas.len())?;
        if lambdas.iter().any(|&l| l != 1 && l != -1) {
            return Err(crate::error::invalid("lambdas", "entries must be +1 or -1"));
        }
        Ok(Self { lambdas })
    }

    pub fn from_index(m: usize, index: usize) -> Self {
        let lambdas = (0..m)
            .map(|j| if (index >> (m - 1 - j)) & 1 == 0 { 1 } else { -1 })
            .collect();
        Self { lambdas }
    }

    pub fn index(&self) -> usize {
        self.lambdas.iter().fold(0, |acc, &l| (acc << 1) | usize::from(l < 0))
    }

    /// All `2^m` labels in index order.
    pub fn all(m: usize) -> Vec<SpinLabel> {
        (0..1usize << m).map(|i| Self::from_index(m, i)).collect()
    }

    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[i8] {
        &self.lambdas
    }

    pub fn lambda(&self, site: usize) -> i8 {
        self.lambdas[site]
    }

    /// `Lambda = sum_j lambda_j`
    pub fn total(&self) -> i32 {
        self.lambdas.iter().map(|&l| l as i32).sum()
    }

    /// Label with the sign at `site` reversed.
    pub fn flipped(&self, site: usize) -> SpinLabel {
        let mut lambdas = self.lambdas.clone();
        lambdas[site] = -lambdas[site];
        Self { lambdas }
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_atoms(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ATOMS {
        return Err(Error::AtomCount(m));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Z,
}

fn pauli(axis: PauliAxis) -> RMatrix {
    match axis {
        PauliAxis::X => RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        PauliAxis::Z => RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
    }
}

fn embed(m: usize, site: usize, op: &RMatrix) -> RMatrix {
    let mut out = RMatrix::identity(1, 1);
    for j in 0..m {
        out = if j == site {
            out.kronecker(op)
        } else {
            out.kronecker(&RMatrix::identity(2, 2))
        };
    }
    out
}

/// `sigma_k` acting on `site` (0-based) of an `m`-atom register.
pub fn pauli_embedded(m: usize, axis: PauliAxis, site: usize) -> Result<RMatrix> {
    check_atoms(m)?;
    if site >= m {
        return Err(Error::SiteOutOfRange { site, m });
    }
    Ok(embed(m, site, &pauli(axis)))
}

/// `sum_j sigma_k^{(j)}`
pub fn pauli_sum(m: usize, axis: PauliAxis) -> Result<RMatrix> {
    check_atoms(m)?;
    let d = 1 << m;
    let mut out = RMatrix::zeros(d, d);
    for j in 0..m {
        out += embed(m, j, &pauli(axis));
    }
    Ok(out)
}

/// `W^{(x) m}` with `W = (1 1; 1 -1)/sqrt 2`.
pub fn walsh_hadamard(m: usize) -> Result<RMatrix> {
    check_atoms(m)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let w = RMatrix::from_row_slice(2, 2, &[s, s, s, -s]);
    let mut out = RMatrix::identity(1, 1);
    for _ in 0..m {
        out = out.kronecker(&w);
    }
    Ok(out)
}

/// `|lambda_1> (x) ... (x) |lambda_m>` with `|l> = (1, l)/sqrt 2`.
pub fn lambda_vector(label: &SpinLabel) -> DVector<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = DVector::from_element(1, 1.0);
    for &l in label.lambdas() {
        out = out.kronecker(&DVector::from_column_slice(&[s, s * l as f64]));
    }
    out
}
