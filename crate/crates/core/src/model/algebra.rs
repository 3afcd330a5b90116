//! Representations of the Heisenberg, su(1,1) and su(2) algebras and the key operator identities
//! `omega L3 + g1 Lambda (L+ + L-) = Omega e^{-(Lambda x/2) S} L3' e^{(Lambda x/2) S}`, `S = L+ - L-`.

use super::Algebra;
use crate::bosonic::{ladder_operators, FockTruncation};
use crate::error::{Error, Result};
use crate::linalg::{expm_real, max_abs_real, RMatrix};
use nalgebra::DVector;

/// Raising, lowering and Cartan generators with the number of levels on which identities hold.
#[derive(Debug, Clone)]
pub struct Generators {
    pub raise: RMatrix,
    pub lower: RMatrix,
    pub cartan: RMatrix,
    pub trusted: usize,
}

impl Generators {
    pub fn dim(&self) -> usize {
        self.cartan.nrows()
    }

    /// Max-norm of `[L3, L+] - L+` and `[L3, L-] + L-` on the trusted block.
    pub fn cartan_residual(&self) -> f64 {
        let k = self.trusted;
        let up = &self.cartan * &self.raise - &self.raise * &self.cartan - &self.raise;
        let down = &self.cartan * &self.lower - &self.lower * &self.cartan + &self.lower;
        let lead = |m: &RMatrix| max_abs_real(&m.view((0, 0), (k, k)).into_owned());
        lead(&up).max(lead(&down))
    }
}

/// A concrete representation used for the key-formula checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgebraRep {
    /// Truncated Fock space.
    N(FockTruncation),
    /// Truncated discrete series with Bargmann index `bargmann > 0`.
    K { bargmann: f64, trunc: FockTruncation },
    /// Spin `twice_spin / 2`, exact.
    J { twice_spin: usize },
}

impl AlgebraRep {
    pub fn kind(&self) -> Algebra {
        match self {
            AlgebraRep::N(_) => Algebra::N,
            AlgebraRep::K { .. } => Algebra::K,
            AlgebraRep::J { .. } => Algebra::J,
        }
    }

    pub fn generators(&self) -> Result<Generators> {
        match *self {
            AlgebraRep::N(trunc) => {
                let l = ladder_operators(trunc);
                Ok(Generators {
                    raise: l.a_dagger,
                    lower: l.a,
                    cartan: l.number,
                    trusted: trunc.trusted(),
                })
            }
            AlgebraRep::K { bargmann, trunc } => su11_discrete(bargmann, trunc),
            AlgebraRep::J { twice_spin } => Ok(su2(twice_spin)),
        }
    }
}

/// Discrete series: `K3 = K + n`, `K+|n> = sqrt((n+1)(2K+n)) |n+1>`.
pub fn su11_discrete(bargmann: f64, trunc: FockTruncation) -> Result<Generators> {
    if !(bargmann > 0.0) {
        return Err(crate::error::invalid("bargmann", "Bargmann index must be positive"));
    }
    let d = trunc.dim();
    let mut raise = RMatrix::zeros(d, d);
    for n in 0..d - 1 {
        let nf = n as f64;
        raise[(n + 1, n)] = ((nf + 1.0) * (2.0 * bargmann + nf)).sqrt();
    }
    Ok(Generators {
        lower: raise.transpose(),
        raise,
        cartan: RMatrix::from_diagonal(&DVector::from_fn(d, |n, _| bargmann + n as f64)),
        trusted: trunc.trusted(),
    })
}

/// Two-boson generators `K+ = a1^dag a2^dag`, `K- = a2 a1`, `K3 = (N1 + N2 + 1)/2`
/// restricted to the sector `n1 - n2 = difference`, basis `|n + difference, n>`.
/// The sector carries Bargmann index `(difference + 1)/2`.
pub fn su11_schwinger(mode_dim: usize, difference: usize) -> Result<Generators> {
    let trunc = FockTruncation::new(mode_dim, 1)?;
    let l = ladder_operators(trunc);
    let id = RMatrix::identity(mode_dim, mode_dim);
    let a1 = l.a.kronecker(&id);
    let a2 = id.kronecker(&l.a);
    let raise = a1.transpose() * a2.transpose();
    let lower = &a2 * &a1;
    let cartan = (l.number.kronecker(&id) + id.kronecker(&l.number) + RMatrix::identity(mode_dim * mode_dim, mode_dim * mode_dim)) * 0.5;
    let levels = mode_dim - difference;
    let index = |n: usize| (n + difference) * mode_dim + n;
    let restrict = |m: &RMatrix| RMatrix::from_fn(levels, levels, |i, j| m[(index(i), index(j))]);
    Ok(Generators {
        raise: restrict(&raise),
        lower: restrict(&lower),
        cartan: restrict(&cartan),
        trusted: levels - 1,
    })
}

/// Spin-`j` generators, `J3 = diag(-j, ..., j)`, `J+|j,m> = sqrt((j-m)(j+m+1)) |j,m+1>`.
pub fn su2(twice_spin: usize) -> Generators {
    let d = twice_spin + 1;
    let j = twice_spin as f64 / 2.0;
    let mval = |k: usize| -j + k as f64;
    let mut raise = RMatrix::zeros(d, d);
    for k in 0..d - 1 {
        let m = mval(k);
        raise[(k + 1, k)] = ((j - m) * (j + m + 1.0)).sqrt();
    }
    Generators {
        lower: raise.transpose(),
        raise,
        cartan: RMatrix::from_diagonal(&DVector::from_fn(d, |k, _| mval(k))),
        trusted: d,
    }
}

/// Effective frequency and displacement scale of a key formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyFormula {
    pub omega_eff: f64,
    pub x: f64,
}

impl KeyFormula {
    /// Constant added to `L3` on the right-hand side.
    fn shift(&self, kind: Algebra, g1: f64, omega: f64, lambda: i32) -> f64 {
        match kind {
            Algebra::N => -(g1 * lambda as f64 / omega).powi(2),
            _ => 0.0,
        }
    }
}

pub fn key_formula(kind: Algebra, omega: f64, g1: f64, lambda: i32) -> Result<KeyFormula> {
    let r = 2.0 * g1 * lambda as f64 / omega;
    let lam = lambda as f64;
    match kind {
        Algebra::N => Ok(KeyFormula { omega_eff: omega, x: 2.0 * g1 / omega }),
        _ if lambda == 0 => Err(Error::KeyFormulaDomain(format!(
            "Lambda = 0 leaves x undefined for algebra {kind}"
        ))),
        Algebra::K => {
            if r.abs() >= 1.0 {
                return Err(Error::KeyFormulaDomain(format!(
                    "|2 g1 Lambda / omega| = {} must be below 1",
                    r.abs()
                )));
            }
            Ok(KeyFormula { omega_eff: omega * (1.0 - r * r).sqrt(), x: r.atanh() / lam })
        }
        Algebra::J => Ok(KeyFormula { omega_eff: omega * (1.0 + r * r).sqrt(), x: r.atan() / lam }),
    }
}

/// Max-norm difference of the two sides of the key formula on the trusted block.
pub fn key_formula_residual(rep: &AlgebraRep, omega: f64, g1: f64, lambda: i32) -> Result<f64> {
    let kind = rep.kind();
    let kf = key_formula(kind, omega, g1, lambda)?;
    let gens = rep.generators()?;
    let lhs = &gens.cartan * omega + (&gens.raise + &gens.lower) * (g1 * lambda as f64);
    let theta = lambda as f64 * kf.x / 2.0;
    let s = &gens.raise - &gens.lower;
    let fwd = expm_real(&(&s * theta));
    let back = expm_real(&(&s * -theta));
    let d = gens.dim();
    let shifted = &gens.cartan + RMatrix::identity(d, d) * kf.shift(kind, g1, omega, lambda);
    let rhs = back * shifted * fwd * kf.omega_eff;
    let k = gens.trusted;
    Ok(max_abs_real(&(lhs - rhs).view((0, 0), (k, k)).into_owned()))
}
