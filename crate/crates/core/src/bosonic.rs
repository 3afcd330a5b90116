//! Truncated single-mode boson operators and displacements.

use crate::error::{Error, Result};
use crate::linalg::{expm_real, RMatrix};
use serde::Serialize;

/// Largest `theta^2 / dim` accepted by [`displacement`].
pub const DISPLACEMENT_FRACTION: f64 = 0.25;

/// Fock cutoff plus the number of top levels excluded from identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FockTruncation {
    dim: usize,
    buffer: usize,
}

impl FockTruncation {
    pub fn new(dim: usize, buffer: usize) -> Result<Self> {
        if dim < 2 || buffer >= dim {
            return Err(Error::InvalidTruncation { dim, buffer });
        }
        Ok(Self { dim, buffer })
    }

    /// Smallest buffer `b >= dim/4` with `b >= 4 theta^2 (dim - b - 1)`.
    pub fn recommended(dim: usize, theta_max: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidTruncation { dim, buffer: 0 });
        }
        let s = 4.0 * theta_max * theta_max;
        let buffer = (dim.div_ceil(4)..dim)
            .find(|&b| b as f64 >= s * (dim - b - 1) as f64)
            .unwrap_or(dim - 1);
        Self::new(dim, buffer)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn buffer(&self) -> usize {
        self.buffer
    }

    /// Number of trusted levels, `dim - buffer`.
    pub fn trusted(&self) -> usize {
        self.dim - self.buffer
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.trusted() {
            return Err(Error::BufferZone { n, trusted: self.trusted() });
        }
        Ok(())
    }

    /// Truncation rules for displacements up to `theta_max`, applied at the top trusted level.
    pub fn soundness(&self, theta_max: f64) -> Soundness {
        let n_max = self.trusted() - 1;
        let t2 = theta_max * theta_max;
        Soundness {
            theta_max,
            n_max,
            occupation: t2 * (n_max + 1) as f64,
            occupation_limit: self.dim as f64 / 4.0,
            buffer_needed: 4.0 * t2 * n_max as f64,
            buffer: self.buffer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Soundness {
    pub theta_max: f64,
    pub n_max: usize,
    /// `theta^2 (n_max + 1)`, must not exceed `dim / 4`
    pub occupation: f64,
    pub occupation_limit: f64,
    /// `4 theta^2 n_max`, must not exceed the buffer
    pub buffer_needed: f64,
    pub buffer: usize,
}

impl Soundness {
    pub fn is_sound(&self) -> bool {
        self.occupation <= self.occupation_limit && self.buffer_needed <= self.buffer as f64
    }
}

/// Annihilation, creation and number operators.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub a: RMatrix,
    pub a_dagger: RMatrix,
    pub number: RMatrix,
}

pub fn ladder_operators(trunc: FockTruncation) -> Ladder {
    let d = trunc.dim();
    let mut a = RMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    let a_dagger = a.transpose();
    let number = RMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |n, _| n as f64));
    Ladder { a, a_dagger, number }
}

/// `exp(theta (a^dagger - a))` on the truncated space.
pub fn displacement(trunc: FockTruncation, theta: f64) -> Result<RMatrix> {
    let limit = DISPLACEMENT_FRACTION * trunc.dim() as f64;
    if theta * theta > limit {
        return Err(Error::TruncationUnsound { theta, dim: trunc.dim(), limit });
    }
    Ok(displacement_unchecked(trunc.dim(), theta))
}

pub(crate) fn displacement_unchecked(dim: usize, theta: f64) -> RMatrix {
    if theta == 0.0 {
        return RMatrix::identity(dim, dim);
    }
    let mut gen = RMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = theta * (n as f64).sqrt();
        gen[(n, n - 1)] = s;
        gen[(n - 1, n)] = -s;
    }
    expm_real(&gen)
}

/// Laguerre polynomial `L_n(y)` by the three-term recurrence.
pub fn laguerre(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - y);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - y) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<n| exp(x (a^dagger - a)) |n> = e^{-x^2/2} L_n(x^2)`.
pub fn displaced_diag_element(n: usize, x: f64) -> f64 {
    let y = x * x;
    (-0.5 * y).exp() * laguerre(n, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_real;

    fn trunc(dim: usize, buffer: usize) -> FockTruncation {
        FockTruncation::new(dim, buffer).unwrap()
    }

    #[test]
    fn truncation_validation() {
        assert!(FockTruncation::new(1, 0).is_err());
        assert!(FockTruncation::new(4, 4).is_err());
        assert_eq!(trunc(48, 20).trusted(), 28);
        assert!(trunc(48, 20).check_level(28).is_err());
    }

    #[test]
    fn recommended_buffer() {
        let t = FockTruncation::recommended(48, 0.4).unwrap();
        assert_eq!(t.buffer(), 19);
        assert!(t.soundness(0.4).is_sound());
        assert!(!trunc(48, 12).soundness(0.4).is_sound());
        assert!(!trunc(4, 1).soundness(1.0).is_sound());
        assert_eq!(FockTruncation::recommended(64, 0.0).unwrap().buffer(), 16);
    }

    #[test]
    fn ladder_smallest() {
        let l = ladder_operators(trunc(2, 0));
        assert_eq!(l.a, RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn canonical_commutator_away_from_cutoff() {
        let l = ladder_operators(trunc(4, 1));
        let comm = &l.a * &l.a_dagger - &l.a_dagger * &l.a;
        let lead = comm.view((0, 0), (3, 3)).into_owned();
        assert!(max_abs_real(&(lead - RMatrix::identity(3, 3))) < 1e-14);
        assert!((comm[(3, 3)] + 3.0).abs() < 1e-14);
    }

    #[test]
    fn number_is_adag_a() {
        let l = ladder_operators(trunc(16, 1));
        let diff = &l.a_dagger * &l.a - &l.number;
        assert!(max_abs_real(&diff) < 1e-14);
    }

    #[test]
    fn displacement_identity_and_coherent_column() {
        let t = trunc(64, 16);
        assert_eq!(displacement(t, 0.0).unwrap(), RMatrix::identity(64, 64));
        let d = displacement(t, 0.5).unwrap();
        // coherent state by direct series
        let mut amp = (-0.125f64).exp();
        for n in 0..40 {
            if n > 0 {
                amp *= 0.5 / (n as f64).sqrt();
            }
            assert!((d[(n, 0)] - amp).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn displacement_group_inverse_and_unitarity() {
        let t = trunc(64, 16);
        let p = displacement(t, 1.3).unwrap();
        let m = displacement(t, -1.3).unwrap();
        let prod = &p * &m;
        assert!(max_abs_real(&(prod - RMatrix::identity(64, 64))) < 1e-12);
        let gram = p.transpose() * &p;
        assert!(max_abs_real(&(gram - RMatrix::identity(64, 64))) < 1e-12);
    }

    #[test]
    fn displacement_refuses_large_theta() {
        assert!(matches!(
            displacement(trunc(8, 2), 1.5),
            Err(Error::TruncationUnsound { .. })
        ));
    }

    #[test]
    fn laguerre_low_orders() {
        let y: f64 = 0.7;
        assert_eq!(laguerre(0, y), 1.0);
        assert!((laguerre(2, y) - (y * y - 4.0 * y + 2.0) / 2.0).abs() < 1e-15);
        let l3 = (-y.powi(3) + 9.0 * y * y - 18.0 * y + 6.0) / 6.0;
        assert!((laguerre(3, y) - l3).abs() < 1e-14);
    }

    #[test]
    fn diag_element_matches_matrix() {
        assert_eq!(displaced_diag_element(0, 0.0), 1.0);
        let d = displacement(trunc(64, 16), 0.8).unwrap();
        assert!((d[(2, 2)] - displaced_diag_element(2, 0.8)).abs() < 1e-10);
        assert_eq!(displaced_diag_element(5, 0.9), displaced_diag_element(5, -0.9));
    }
}
