//! Frame-reduced cat-basis equations at a fixed Fock level, amplitudes ordered `(c1, c3, c2, c4)`.

use super::two_level::{appendix_propagator, spectral_decompose, TwoLevelSpectral};
use crate::cat_frame::{e_delta, CoefficientFunctions, Coefficients, Sign};
use crate::error::Result;
use crate::linalg::{cis, C64};
use crate::model::ModelParams;
use nalgebra::{Matrix2, Matrix4, Vector4};

/// `U_n(t)` and `V_n(t)`: the appendix propagator with `(E_{Delta,n,+-}, omega x^2)`.
pub fn un_vn(n: usize, params: &ModelParams, t: f64) -> Result<(Matrix2<C64>, Matrix2<C64>)> {
    let gamma = params.gamma();
    let ep = e_delta(n, params, Sign::Plus)?;
    let em = e_delta(n, params, Sign::Minus)?;
    Ok((appendix_propagator(ep, gamma, t), appendix_propagator(em, gamma, t)))
}

/// Everything needed to evaluate the block equations at one Fock level.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub coefficients: CoefficientFunctions,
    pub plus: TwoLevelSpectral,
    pub minus: TwoLevelSpectral,
    pub gamma: f64,
    exact: bool,
}

impl BlockSystem {
    /// Coefficients from the truncated Bessel series (`cutoff = None` for the default).
    pub fn new(n: usize, params: &ModelParams, cutoff: Option<usize>) -> Result<Self> {
        let gamma = params.gamma();
        Ok(Self {
            coefficients: CoefficientFunctions::new(n, params, cutoff)?,
            plus: spectral_decompose(e_delta(n, params, Sign::Plus)?, gamma),
            minus: spectral_decompose(e_delta(n, params, Sign::Minus)?, gamma),
            gamma,
            exact: false,
        })
    }

    /// Coefficients evaluated in closed form instead of the Fourier series.
    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn coefficients_at(&self, t: f64) -> Coefficients {
        if self.exact {
            self.coefficients.eval_exact(t)
        } else {
            self.coefficients.eval(t)
        }
    }

    /// `blockdiag(U_n(t), V_n(t))`
    pub fn frame(&self, t: f64) -> Matrix4<C64> {
        let phase = Matrix2::from_diagonal(&nalgebra::Vector2::new(C64::new(1.0, 0.0), cis(self.gamma * t)));
        let u = phase * self.plus.q_of_t(t);
        let v = phase * self.minus.q_of_t(t);
        let mut w = Matrix4::zeros();
        w.fixed_view_mut::<2, 2>(0, 0).copy_from(&u);
        w.fixed_view_mut::<2, 2>(2, 2).copy_from(&v);
        w
    }

    /// Harmonic coupling `(0 A 0 B; A* 0 C* 0; 0 C 0 D; B* 0 D* 0)` with `A = e^{-i gamma t} A_0` etc.
    pub fn coupling(&self, t: f64) -> Matrix4<C64> {
        let k = self.coefficients_at(t);
        let ph = cis(-self.gamma * t);
        let (a, b, c, d) = (ph * k.a0, ph * k.b0, ph * k.c0, ph * k.d0);
        let z = C64::new(0.0, 0.0);
        Matrix4::new(
            z, a, z, b, //
            a.conj(), z, c.conj(), z, //
            z, c, z, d, //
            b.conj(), z, d.conj(), z,
        )
    }

    /// Generator `G(t)` of `i dc/dt = G c`: the coupling seen from the rotating frame.
    pub fn generator(&self, t: f64) -> Matrix4<C64> {
        let w = self.frame(t);
        w.adjoint() * self.coupling(t) * w
    }

    pub fn rhs(&self, t: f64, c: &Vector4<C64>) -> Vector4<C64> {
        self.generator(t) * c
    }
}

/// `G(t) c` for `i dc/dt = G(t) c` with the default Bessel cutoff.
pub fn block_equations_rhs(n: usize, params: &ModelParams, t: f64, c: &Vector4<C64>) -> Result<Vector4<C64>> {
    Ok(BlockSystem::new(n, params, None)?.rhs(t, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_frame::k0f_k1f;
    use crate::linalg::I;

    fn params() -> ModelParams {
        ModelParams::new(1.0, 0.2, 0.05, 0.005, vec![1.0, 0.37]).unwrap()
    }

    fn max_norm<const R: usize, const C: usize>(m: nalgebra::SMatrix<C64, R, C>) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    #[test]
    fn frames_start_at_identity_and_stay_unitary() {
        let (u, v) = un_vn(0, &params(), 0.0).unwrap();
        assert!(max_norm(u - Matrix2::identity()) < 1e-15);
        assert!(max_norm(v - Matrix2::identity()) < 1e-15);
        let (u, v) = un_vn(0, &params(), 13.0).unwrap();
        assert!(max_norm(u.adjoint() * u - Matrix2::identity()) < 1e-14);
        assert!(max_norm(v.adjoint() * v - Matrix2::identity()) < 1e-14);
    }

    #[test]
    fn equal_drives_freeze_v() {
        let p = ModelParams::new(1.0, 0.2, 0.05, 0.005, vec![0.6, 0.6]).unwrap();
        let (_, v) = un_vn(0, &p, 4.2).unwrap();
        assert!(max_norm(v - Matrix2::identity()) < 1e-14);
    }

    #[test]
    fn frames_solve_stationary_equations() {
        // i d/dt W = (delta/2) d K0F' W, with K0F' in block order
        let p = params();
        let sys = BlockSystem::new(0, &p, None).unwrap();
        let perm = [0usize, 2, 1, 3];
        let (t, h) = (3.1, 1e-5);
        let (k0, _) = k0f_k1f(&p, None, t).unwrap();
        let k0b = Matrix4::from_fn(|i, j| k0[(perm[i], perm[j])] * sys.coefficients.prefactor);
        let dw = (sys.frame(t + h) - sys.frame(t - h)) / C64::new(2.0 * h, 0.0);
        assert!(max_norm(dw * I - k0b * sys.frame(t)) < 1e-6);
    }

    #[test]
    fn zero_splitting_gives_zero() {
        let p = ModelParams::new(1.0, 0.2, 0.05, 0.0, vec![1.0, 0.37]).unwrap();
        let c = Vector4::new(C64::new(1.0, 0.0), C64::new(0.0, 0.3), C64::new(0.2, 0.0), C64::new(0.0, 0.0));
        assert_eq!(block_equations_rhs(0, &p, 1.1, &c).unwrap(), Vector4::zeros());
    }

    #[test]
    fn sparsity_at_origin() {
        let e1 = Vector4::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        let r = block_equations_rhs(0, &params(), 0.0, &e1).unwrap();
        // only the c1 - c2 coupling survives at t = 0
        assert!(r[0].norm() < 1e-18 && r[2].norm() < 1e-18 && r[3].norm() < 1e-18);
        assert!(r[1].norm() > 1e-6);
    }

    #[test]
    fn generator_is_hermitian() {
        let sys = BlockSystem::new(1, &params(), None).unwrap();
        let g = sys.generator(2.7);
        assert!(max_norm(g - g.adjoint()) < 1e-16);
    }
}
