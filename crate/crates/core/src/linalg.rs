//! Dense complex matrix helpers shared by the physics modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `e^{i phase}`
#[inline]
pub fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(c)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.abs()))
}

/// Matrix exponential (Padé scaling and squaring).
pub fn expm(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

pub fn expm_real(m: &RMatrix) -> RMatrix {
    m.clone().exp()
}

/// Max-norm of `U^dagger U - 1`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

/// Max-norm of `H - H^dagger`.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    max_abs(&(h - h.adjoint()))
}

/// Leading `k x k` block.
pub fn leading_block(m: &CMatrix, k: usize) -> CMatrix {
    m.view((0, 0), (k, k)).into_owned()
}
