//! Stationary coupling left after the rotating-wave approximation and the resulting gate.

use super::resonance::{Branch, ResonanceSolution, ResonanceTarget};
use crate::bessel::odd_part;
use crate::bosonic::displaced_diag_element;
use crate::error::Result;
use crate::linalg::C64;
use crate::model::ModelParams;
use nalgebra::{Matrix2, Matrix4, Vector2};
use serde::Serialize;

/// Rate `R`, rank-one coupling `K = u v^T` and the gate `exp{(i R t/2)(0 K; K^T 0)}` on
/// amplitudes `(c1, c3, c2, c4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RwaGate {
    pub rabi_rate: f64,
    pub k: Matrix2<f64>,
    pub u: Vector2<f64>,
    pub v: Vector2<f64>,
    /// `R = 0` because the harmonic is even.
    pub trivial: bool,
    /// The branch pair resonant at `-alpha` together with this one.
    pub partner: Option<Channel>,
}

/// A second stationary channel `-rate u v^T` acting on the complementary eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub target: ResonanceTarget,
    pub harmonic: i32,
    pub rate: f64,
    pub u: Vector2<f64>,
    pub v: Vector2<f64>,
}

impl Channel {
    pub fn k(&self) -> Matrix2<f64> {
        self.u * self.v.transpose()
    }
}

/// `a_ij = P_+^T sigma_x P_-`
pub fn coupling_matrix(p_plus: &Matrix2<f64>, p_minus: &Matrix2<f64>) -> Matrix2<f64> {
    let sx = Matrix2::new(0.0, 1.0, 1.0, 0.0);
    p_plus.transpose() * sx * p_minus
}

/// `P_+ E_11 P_+^{-1} sigma_x P_- E_11 P_-^{-1}`, the projected coupling before factorization.
pub fn projected_coupling(p_plus: &Matrix2<f64>, p_minus: &Matrix2<f64>) -> Matrix2<f64> {
    let e11 = Matrix2::new(1.0, 0.0, 0.0, 0.0);
    let sx = Matrix2::new(0.0, 1.0, 1.0, 0.0);
    p_plus * e11 * p_plus.try_inverse().unwrap() * sx * p_minus * e11 * p_minus.try_inverse().unwrap()
}

impl RwaGate {
    pub fn new(rabi_rate: f64, u: Vector2<f64>, v: Vector2<f64>) -> Self {
        Self { rabi_rate, k: u * v.transpose(), u, v, trivial: rabi_rate == 0.0, partner: None }
    }

    /// `(0 K; K^T 0)`
    pub fn generator(&self) -> Matrix4<f64> {
        block_generator(&self.k)
    }

    pub fn gate(&self, t: f64) -> Matrix4<C64> {
        gate_unitary(self, t)
    }
}

pub(crate) fn block_generator(k: &Matrix2<f64>) -> Matrix4<f64> {
    let mut g = Matrix4::zeros();
    g.fixed_view_mut::<2, 2>(0, 2).copy_from(k);
    g.fixed_view_mut::<2, 2>(2, 0).copy_from(&k.transpose());
    g
}

/// Time-averaged generator `R (0 K; K^T 0) + R' (0 K'; K'^T 0)` including the partner channel,
/// so that `c(t) = exp(i t G) c(0)` in the rotating frame.
pub fn effective_generator(gate: &RwaGate) -> Matrix4<f64> {
    let mut g = block_generator(&gate.k) * gate.rabi_rate;
    if let Some(p) = &gate.partner {
        g += block_generator(&p.k()) * p.rate;
    }
    g
}

/// `exp(i t G)` with `G` from [`effective_generator`]. On the main channel alone this is
/// [`gate_unitary`] at time `2t`.
pub fn averaged_propagator(gate: &RwaGate, t: f64) -> Matrix4<C64> {
    effective_generator(gate).map(|v| C64::new(0.0, v * t)).exp()
}

/// Closed form `(1 - KK^T + cos(Rt/2) KK^T, i sin(Rt/2) K; i sin(Rt/2) K^T, 1 - K^TK + cos(Rt/2) K^TK)`.
pub fn gate_unitary(gate: &RwaGate, t: f64) -> Matrix4<C64> {
    let half = gate.rabi_rate * t / 2.0;
    let (cs, sn) = (half.cos(), half.sin());
    let k = gate.k;
    let kkt = k * k.transpose();
    let ktk = k.transpose() * k;
    let id = Matrix2::identity();
    let tl = (id - kkt + kkt * cs).map(|v| C64::new(v, 0.0));
    let br = (id - ktk + ktk * cs).map(|v| C64::new(v, 0.0));
    let tr = k.map(|v| C64::new(0.0, sn * v));
    let bl = k.transpose().map(|v| C64::new(0.0, sn * v));
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(&tl);
    out.fixed_view_mut::<2, 2>(0, 2).copy_from(&tr);
    out.fixed_view_mut::<2, 2>(2, 0).copy_from(&bl);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(&br);
    out
}

fn channel(params: &ModelParams, n: usize, res: &ResonanceSolution, target: ResonanceTarget, harmonic: i32) -> Channel {
    let omega2 = res.omega2;
    let prefactor = 0.5 * params.delta * displaced_diag_element(n, params.x());
    let b = odd_part(harmonic, 2.0 * params.g2 / omega2);
    let u = res.spectral_plus.eigenvector(target.plus.column());
    let v = res.spectral_minus.eigenvector(target.minus.column());
    let a = u.dot(&(Matrix2::new(0.0, 1.0, 1.0, 0.0) * v));
    Channel { target, harmonic, rate: prefactor * b * a, u, v }
}

/// Stationary coupling at a solved resonance. For the `mu-mu` target
/// `R = (delta/2) <n|D(x)|n> o_alpha(Gamma_2) a_11` with
/// `a_11 = (E_+ mu_- + E_- mu_+) / sqrt((E_+^2 + mu_+^2)(E_-^2 + mu_-^2))`.
pub fn rwa_reduce(n: usize, params: &ModelParams, res: &ResonanceSolution) -> Result<RwaGate> {
    params.require_atoms("rwa_reduce", 2)?;
    let main = channel(params, n, res, res.target, res.alpha_harmonic);
    let partner = channel(params, n, res, res.target.partner(), -res.alpha_harmonic);
    let mut gate = RwaGate::new(main.rate, main.u, main.v);
    gate.partner = Some(partner);
    Ok(gate)
}

/// Rate and channel vectors for an arbitrary branch pair, without solving for a root.
pub fn channel_at(params: &ModelParams, n: usize, res: &ResonanceSolution, plus: Branch, minus: Branch, harmonic: i32) -> Channel {
    channel(params, n, res, ResonanceTarget { plus, minus }, harmonic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rwa::two_level::spectral_decompose;

    fn max_norm(m: Matrix4<C64>) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    fn sample_gate(rate: f64, a: f64, b: f64) -> RwaGate {
        RwaGate::new(rate, Vector2::new(a.cos(), a.sin()), Vector2::new(b.cos(), b.sin()))
    }

    #[test]
    fn identity_at_origin() {
        let g = sample_gate(0.3, 0.4, -1.1);
        assert_eq!(g.gate(0.0), Matrix4::identity());
    }

    #[test]
    fn closed_form_matches_exponential() {
        let g = sample_gate(0.37, 0.4, -1.1);
        let t = 5.3;
        let gen = g.generator().map(|v| C64::new(0.0, g.rabi_rate * t / 2.0 * v));
        assert!(max_norm(g.gate(t) - gen.exp()) < 1e-12);
        assert!(max_norm(g.gate(t) * g.gate(-t) - Matrix4::identity()) < 1e-14);
    }

    #[test]
    fn quarter_period_transfers_channel() {
        let g = sample_gate(0.2, 0.3, 0.9);
        let u = g.gate(std::f64::consts::PI / 0.2);
        // the even-block channel vector v maps fully onto i u
        let mut vin = nalgebra::Vector4::zeros();
        vin[2] = C64::new(g.v[0], 0.0);
        vin[3] = C64::new(g.v[1], 0.0);
        let out = u * vin;
        assert!((out[0] - C64::new(0.0, g.u[0])).norm() < 1e-15);
        assert!((out[1] - C64::new(0.0, g.u[1])).norm() < 1e-15);
    }

    #[test]
    fn averaged_propagator_runs_twice_as_fast() {
        let g = sample_gate(0.37, 0.4, -1.1);
        assert!(max_norm(averaged_propagator(&g, 2.1) - g.gate(4.2)) < 1e-13);
    }

    #[test]
    fn projector_factorization() {
        let sp = spectral_decompose(0.004, 0.16);
        let sm = spectral_decompose(-0.0013, 0.16);
        let a = coupling_matrix(&sp.p, &sm.p);
        let k = sp.eigenvector(0) * sm.eigenvector(0).transpose();
        let direct = projected_coupling(&sp.p, &sm.p);
        assert!((direct - k * a[(0, 0)]).amax() < 1e-15);
        let (ep, em, mp, mm) = (sp.alpha, sm.alpha, sp.mu, sm.mu);
        let a11 = (ep * mm + em * mp) / ((ep * ep + mp * mp) * (em * em + mm * mm)).sqrt();
        assert!((a[(0, 0)] - a11).abs() < 1e-15);
    }
}
