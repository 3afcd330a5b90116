//! Residual checks shared by `verify` and the acceptance suite. Each returns the raw residual;
//! comparing against a tolerance is left to the caller.

use cavity_core::bosonic::{displaced_diag_element, displacement, FockTruncation};
use cavity_core::cat_frame::{hf_by_conjugation_in, hf_matrix};
use cavity_core::linalg::{max_abs, CMatrix, C64};
use cavity_core::model::{build_h0, key_formula_residual, AlgebraRep, DressedBasis, ModelParams};
use cavity_core::rwa::{appendix_propagator, gate_unitary, ResonanceSolution, RwaGate, TwoLevelSpectral};
use cavity_core::rwa::two_level::ode_residual;
use cavity_core::Result;
use nalgebra::{Matrix2, Matrix4, Vector2};

pub const KEY_FORMULA_N_TOL: f64 = 1e-8;
pub const KEY_FORMULA_J_TOL: f64 = 1e-10;
pub const KEY_FORMULA_K_TOL: f64 = 1e-7;
pub const DISPLACED_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const U0_ODE_TOL: f64 = 1e-6;
pub const U0_UNITARITY_TOL: f64 = 1e-10;
pub const HF_TOL: f64 = 1e-8;
pub const PROJECTOR_TOL: f64 = 1e-12;
pub const GATE_TOL: f64 = 1e-12;
pub const RESONANCE_TOL: f64 = 1e-10;
pub const APPENDIX_ODE_TOL: f64 = 1e-6;
pub const APPENDIX_UNITARITY_TOL: f64 = 1e-12;
pub const RABI_FORM_TOL: f64 = 1e-12;

fn norm2(m: Matrix2<f64>) -> f64 {
    m.amax()
}

fn cnorm<const R: usize>(m: nalgebra::SMatrix<C64, R, R>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Largest key-formula (N) residual over `Lambda = -m..=m`.
pub fn key_formula_n(params: &ModelParams, trunc: FockTruncation) -> Result<f64> {
    let m = params.m() as i32;
    let mut worst = 0.0f64;
    for lambda in -m..=m {
        worst = worst.max(key_formula_residual(&AlgebraRep::N(trunc), params.omega, params.g1, lambda)?);
    }
    Ok(worst)
}

/// Closed form against the matrix exponential for `n <= n_max` at each `x`, and the larger of the
/// closed-form and matrix `x -> -x` asymmetries.
pub fn displaced_element(trunc: FockTruncation, n_max: usize, xs: &[f64]) -> Result<(f64, f64)> {
    let (mut err, mut sym) = (0.0f64, 0.0f64);
    for &x in xs {
        let fwd = displacement(trunc, x)?;
        let back = displacement(trunc, -x)?;
        for n in 0..=n_max.min(trunc.dim() - 1) {
            let closed = displaced_diag_element(n, x);
            err = err.max((closed - fwd[(n, n)]).abs());
            sym = sym.max((closed - displaced_diag_element(n, -x)).abs()).max((fwd[(n, n)] - back[(n, n)]).abs());
        }
    }
    Ok((err, sym))
}

/// `max |i dU_0/dt B - H_0(t) U_0(t) B|` by a fourth-order central difference with step `h`, and
/// `max |(U_0 B)^dag (U_0 B) - 1|`, both over the sample `times`. `B` holds the trusted dressed states.
pub fn u0_residuals(params: &ModelParams, trunc: FockTruncation, times: &[f64], h: f64) -> Result<(f64, f64)> {
    let basis = DressedBasis::new(params, trunc)?;
    let (mut ode, mut unit) = (0.0f64, 0.0f64);
    let n = basis.len();
    for &t in times {
        let at = |s: f64| basis.phased_columns(t + s);
        let deriv = (at(-2.0 * h) - at(2.0 * h) + (at(h) - at(-h)) * C64::new(8.0, 0.0)) / C64::new(12.0 * h, 0.0);
        let cols = at(0.0);
        let lhs = deriv * C64::new(0.0, 1.0);
        let rhs = build_h0(params, trunc, t)? * &cols;
        ode = ode.max(max_abs(&(lhs - rhs)));
        unit = unit.max(max_abs(&(cols.adjoint() * &cols - CMatrix::identity(n, n))));
    }
    Ok((ode, unit))
}

/// Closed-form `H_F` against conjugation over the whole trusted block.
pub fn hf_residual(params: &ModelParams, trunc: FockTruncation, t: f64) -> Result<f64> {
    let basis = DressedBasis::new(params, trunc)?;
    let n_max = trunc.trusted() - 1;
    let closed = hf_matrix(params, trunc, n_max, t)?;
    let conj = hf_by_conjugation_in(&basis, n_max, t)?;
    Ok(max_abs(&(closed - conj)))
}

/// Idempotence, completeness and mutual annihilation of the spectral projectors of one branch.
pub fn spectral_projector_residual(s: &TwoLevelSpectral) -> f64 {
    let proj = |k: usize| {
        let v = s.eigenvector(k);
        v * v.transpose()
    };
    let (p0, p1) = (proj(0), proj(1));
    [
        norm2(p0 * p0 - p0),
        norm2(p1 * p1 - p1),
        norm2(p0 * p1),
        norm2(p0 + p1 - Matrix2::identity()),
        norm2(s.reconstruct() - s.matrix()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Projector identities at a solved resonance: both branches' spectral projectors, the
/// factorization `Pi_+ sigma_x Pi_- = a u v^T` for every branch pair, and `K K^T K = K`.
pub fn resonance_projector_residual(res: &ResonanceSolution, gate: &RwaGate) -> f64 {
    let sx = Matrix2::new(0.0, 1.0, 1.0, 0.0);
    let mut worst = spectral_projector_residual(&res.spectral_plus).max(spectral_projector_residual(&res.spectral_minus));
    for i in 0..2 {
        for j in 0..2 {
            let u: Vector2<f64> = res.spectral_plus.eigenvector(i);
            let v: Vector2<f64> = res.spectral_minus.eigenvector(j);
            let lhs = (u * u.transpose()) * sx * (v * v.transpose());
            let a = u.dot(&(sx * v));
            worst = worst.max(norm2(lhs - u * v.transpose() * a));
        }
    }
    let k = gate.k;
    worst.max(norm2(k * k.transpose() * k - k)).max(norm2(k.transpose() * k * k.transpose() - k.transpose()))
}

/// Closed-form gate against `exp{(i R t / 2)(0 K; K^T 0)}` and the exact identity at `t = 0`.
pub fn gate_residual(gate: &RwaGate, t: f64) -> (f64, bool) {
    let reference = gate.generator().map(|v| C64::new(0.0, gate.rabi_rate * t / 2.0 * v)).exp();
    (cnorm(gate_unitary(gate, t) - reference), gate_unitary(gate, 0.0) == Matrix4::identity())
}

/// ODE residual, unitarity defect and distance of the `theta = 0` solution from
/// `(cos at, -i sin at; -i sin at, cos at)`.
pub fn appendix_residuals(alpha: f64, theta: f64, t: f64) -> (f64, f64, f64) {
    let u = appendix_propagator(alpha, theta, t);
    let ode = ode_residual(alpha, theta, t, 1e-4);
    let unit = cnorm(u.adjoint() * u - Matrix2::identity());
    let (c, s) = ((alpha * t).cos(), (alpha * t).sin());
    let rabi = Matrix2::new(C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0));
    let rabi_err = cnorm(appendix_propagator(alpha, 0.0, t) - rabi);
    (ode, unit, rabi_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displaced_element_detects_tiny_space() {
        let big = FockTruncation::new(64, 16).unwrap();
        let (err, sym) = displaced_element(big, 10, &[0.4, -1.3]).unwrap();
        assert!(err < 1e-10 && sym < 1e-12);
        let tiny = FockTruncation::new(4, 1).unwrap();
        assert!(displaced_element(tiny, 2, &[1.0]).unwrap().0 > 1e-3);
    }

    #[test]
    fn appendix_forms() {
        let (ode, unit, rabi) = appendix_residuals(0.3, 0.7, 4.0);
        assert!(ode < 1e-6 && unit < 1e-12 && rabi < 1e-12);
    }
}
