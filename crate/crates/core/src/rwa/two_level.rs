//! Two-level problem `i dc/dt = (0, a e^{-i th t}; a e^{i th t}, 0) c`.

use crate::linalg::{cis, C64, I};
use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

/// Eigen-decomposition of `A = (0 a; a th)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelSpectral {
    pub alpha: f64,
    pub theta: f64,
    pub mu: f64,
    pub nu: f64,
    /// Columns are the unit eigenvectors for `mu` and `nu`.
    pub p: Matrix2<f64>,
}

pub fn spectral_decompose(alpha: f64, theta: f64) -> TwoLevelSpectral {
    let s = theta.hypot(2.0 * alpha);
    // pick the cancellation-free root and recover the other from mu nu = -a^2
    let (mu, nu) = if theta >= 0.0 {
        let mu = 0.5 * (theta + s);
        (mu, if mu == 0.0 { 0.0 } else { -alpha * alpha / mu })
    } else {
        let nu = 0.5 * (theta - s);
        (-alpha * alpha / nu, nu)
    };
    let p = if alpha == 0.0 {
        if theta > 0.0 {
            Matrix2::new(0.0, 1.0, 1.0, 0.0)
        } else if theta < 0.0 {
            Matrix2::new(1.0, 0.0, 0.0, -1.0)
        } else {
            Matrix2::identity()
        }
    } else {
        let col = |e: f64| Vector2::new(alpha, e) / alpha.hypot(e);
        Matrix2::from_columns(&[col(mu), col(nu)])
    };
    TwoLevelSpectral { alpha, theta, mu, nu, p }
}

impl TwoLevelSpectral {
    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, self.alpha, self.alpha, self.theta)
    }

    /// `P diag(mu, nu) P^T`
    pub fn reconstruct(&self) -> Matrix2<f64> {
        self.p * Matrix2::from_diagonal(&Vector2::new(self.mu, self.nu)) * self.p.transpose()
    }

    pub fn eigenvector(&self, k: usize) -> Vector2<f64> {
        self.p.column(k).into_owned()
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        [self.mu, self.nu][k]
    }

    /// `Q(t) = e^{-itA} = P diag(e^{-it mu}, e^{-it nu}) P^T`
    pub fn q_of_t(&self, t: f64) -> Matrix2<C64> {
        let p = self.p.map(|v| C64::new(v, 0.0));
        let d = Matrix2::from_diagonal(&Vector2::new(cis(-t * self.mu), cis(-t * self.nu)));
        p * d * p.transpose()
    }
}

pub fn q_of_t(spectral: &TwoLevelSpectral, t: f64) -> Matrix2<C64> {
    spectral.q_of_t(t)
}

/// `U(t) = diag(1, e^{i th t}) e^{-it(0 a; a th)}`
pub fn appendix_propagator(alpha: f64, theta: f64, t: f64) -> Matrix2<C64> {
    let q = spectral_decompose(alpha, theta).q_of_t(t);
    Matrix2::from_diagonal(&Vector2::new(C64::new(1.0, 0.0), cis(theta * t))) * q
}

/// `(0, a e^{-i th t}; a e^{i th t}, 0)`
pub fn frame_hamiltonian(alpha: f64, theta: f64, t: f64) -> Matrix2<C64> {
    Matrix2::new(C64::new(0.0, 0.0), cis(-theta * t) * alpha, cis(theta * t) * alpha, C64::new(0.0, 0.0))
}

/// Max-norm of `i dU/dt - H U` by a central difference with step `h`.
pub fn ode_residual(alpha: f64, theta: f64, t: f64, h: f64) -> f64 {
    let du = (appendix_propagator(alpha, theta, t + h) - appendix_propagator(alpha, theta, t - h)) / C64::new(2.0 * h, 0.0);
    let res = du * I - frame_hamiltonian(alpha, theta, t) * appendix_propagator(alpha, theta, t);
    res.iter().fold(0.0, |m, z| m.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_norm(m: Matrix2<C64>) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    #[test]
    fn closed_form_roots() {
        let s = spectral_decompose(1.0, 0.0);
        assert_eq!((s.mu, s.nu), (1.0, -1.0));
        let s = spectral_decompose(0.0, 2.0);
        assert_eq!((s.mu, s.nu), (2.0, 0.0));
        assert_eq!(s.p, Matrix2::new(0.0, 1.0, 1.0, 0.0));
        let s = spectral_decompose(0.0, 0.0);
        assert_eq!((s.mu, s.nu, s.p), (0.0, 0.0, Matrix2::identity()));
        let s = spectral_decompose(0.0, -1.5);
        assert_eq!((s.mu, s.nu), (0.0, -1.5));
        assert!((s.reconstruct() - s.matrix()).amax() == 0.0);
    }

    #[test]
    fn invariants_and_reconstruction() {
        for &(a, th) in &[(0.7, 0.9), (0.3, -2.0), (1e-9, 0.16), (-0.4, 0.0), (2.0, 1e-8)] {
            let s = spectral_decompose(a, th);
            assert!((s.mu * s.nu + a * a).abs() < 1e-15);
            assert!((s.mu + s.nu - th).abs() < 1e-15);
            assert!((s.reconstruct() - s.matrix()).amax() < 1e-13);
            assert!((s.p.transpose() * s.p - Matrix2::identity()).amax() < 1e-15);
        }
    }

    #[test]
    fn q_matches_generic_exponential() {
        let s = spectral_decompose(0.7, 0.9);
        let gen = s.matrix().map(|v| C64::new(0.0, -1.3 * v));
        let generic = gen.exp();
        assert!(max_norm(s.q_of_t(1.3) - generic) < 1e-12);
    }

    #[test]
    fn propagator_limits() {
        let u = appendix_propagator(0.0, 1.2, 3.0);
        assert!(max_norm(u - Matrix2::identity()) < 1e-15);
        let (a, t) = (0.45f64, 2.3f64);
        let u = appendix_propagator(a, 0.0, t);
        let rabi = Matrix2::new(
            C64::new((a * t).cos(), 0.0),
            C64::new(0.0, -(a * t).sin()),
            C64::new(0.0, -(a * t).sin()),
            C64::new((a * t).cos(), 0.0),
        );
        assert!(max_norm(u - rabi) < 1e-12);
        assert!(max_norm(appendix_propagator(0.3, 1.2, 0.0) - Matrix2::identity()) < 1e-15);
    }

    #[test]
    fn propagator_solves_frame_equation() {
        assert!(ode_residual(0.3, 1.2, 2.0, 1e-5) < 1e-6);
        let u = appendix_propagator(0.3, 1.2, 2.0);
        assert!(max_norm(u.adjoint() * u - Matrix2::identity()) < 1e-14);
    }
}
