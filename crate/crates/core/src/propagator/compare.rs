//! Exact dynamics from a cat state against the rotating-wave gate.

use super::dopri::StepControl;
use super::schrodinger::{integrate_with, uniform_times, Trajectory};
use crate::bosonic::FockTruncation;
use crate::cat_frame::{cat_transform, dropped_norm, CatIndex};
use crate::error::{invalid, Error, Result};
use crate::linalg::{CVector, C64};
use crate::model::{DressedBasis, ModelParams};
use crate::rwa::{averaged_propagator, gate_unitary, rwa_reduce, BlockSystem, ResonanceSolution, RwaGate};
use nalgebra::Vector4;
use serde::Serialize;
use std::f64::consts::PI;

/// DOPRI5 stays stable for `|h lambda| <= 3.3` on the imaginary axis.
const STABILITY_RADIUS: f64 = 3.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareOptions {
    pub trunc: FockTruncation,
    pub tol: f64,
    pub samples_per_period: usize,
    pub max_steps: usize,
    /// Span used when the predicted rate vanishes.
    pub fallback_span: f64,
    pub initial: CatIndex,
}

impl CompareOptions {
    pub fn new(trunc: FockTruncation) -> Self {
        Self {
            trunc,
            tol: 1e-9,
            samples_per_period: 64,
            max_steps: 50_000_000,
            fallback_span: 200.0,
            initial: CatIndex::Phi1,
        }
    }
}

/// Least-squares fit of `A cos^2(f t / 2) + B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RabiFit {
    pub frequency: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub resonance: ResonanceSolution,
    pub gate: RwaGate,
    pub rabi_rate: f64,
    /// Max deviation of the exact population of the initial cat from the gate prediction,
    /// relative to the predicted swing (absolute when the prediction is static).
    pub amplitude_error: f64,
    /// `|f - |R|| / |R|` for the fitted frequency `f`; zero when `R = 0`.
    pub phase_error: f64,
    pub fit: RabiFit,
    /// Same as `amplitude_error` against `exp(i t G)` with both resonant channels.
    pub averaged_error: f64,
    /// `(delta/2) ||H_F''||` restricted to the rows of level `n`.
    pub dropped_hf2_norm: f64,
    /// Largest probability found outside the four cat states of level `n`.
    pub leakage: f64,
    pub span: f64,
    pub times: Vec<f64>,
    /// Populations of `(Phi1..Phi4)` in the rotating frame, one series per cat.
    pub exact: [Vec<f64>; 4],
    pub predicted: [Vec<f64>; 4],
    pub averaged: [Vec<f64>; 4],
    pub norm_drift: f64,
}

/// Lower bound on the step count: the spectral radius of `H_L` times the span over the
/// stability radius.
pub fn estimate_steps(params: &ModelParams, trunc: FockTruncation, span: f64) -> f64 {
    let m = params.m() as f64;
    let top = (trunc.dim() - 1) as f64;
    let radius = params.omega * top + 2.0 * params.g1.abs() * m * top.sqrt() + m * params.g2.abs() + m * params.delta.abs() / 2.0;
    span * radius / STABILITY_RADIUS
}

/// Block-order amplitudes `(c1, c3, c2, c4)` of the four cat states at level `n` in the rotating
/// frame, and the norm they carry.
struct CatProjector {
    basis: DressedBasis,
    system: BlockSystem,
    n: usize,
}

impl CatProjector {
    fn amplitudes(&self, t: f64, psi: &CVector) -> Vector4<C64> {
        let phased = self.basis.phased_columns(t);
        let dressed = Vector4::from_fn(|li, _| phased.column(self.basis.index(li, self.n)).dotc(psi));
        let cats = cat_transform().map(|v| C64::new(v, 0.0)) * dressed;
        let block = Vector4::from_fn(|i, _| cats[[0, 2, 1, 3][i]]);
        self.system.frame(t).adjoint() * block
    }

    fn initial(&self, cat: CatIndex) -> CVector {
        let phased = self.basis.phased_columns(0.0);
        let t = cat_transform();
        let mut psi = CVector::zeros(phased.nrows());
        for li in 0..4 {
            psi += phased.column(self.basis.index(li, self.n)) * C64::new(t[(cat.index(), li)], 0.0);
        }
        psi
    }
}

fn populations_in_cat_order(amp: &Vector4<C64>) -> [f64; 4] {
    CatIndex::ALL.map(|k| amp[k.block_index()].norm_sqr())
}

/// Integrates the full model from the cat state `|{Phi, n}>` and compares its rotating-frame cat
/// populations with the closed-form gate.
pub fn compare_rwa(
    params: &ModelParams,
    resonance: &ResonanceSolution,
    n: usize,
    periods: u32,
    options: &CompareOptions,
) -> Result<ComparisonReport> {
    params.require_atoms("compare_rwa", 2)?;
    params.require_heisenberg("compare_rwa")?;
    params.require_strong_coupling()?;
    if periods == 0 || options.samples_per_period < 4 {
        return Err(invalid("periods", "need at least one period and four samples per period"));
    }
    if resonance.n != n {
        return Err(invalid("n", format!("resonance was solved for level {}, not {n}", resonance.n)));
    }
    options.trunc.check_level(n)?;
    let p = resonance.apply(params);
    let gate = rwa_reduce(n, &p, resonance)?;
    let span = if gate.rabi_rate != 0.0 {
        periods as f64 * 2.0 * PI / gate.rabi_rate.abs()
    } else {
        periods as f64 * options.fallback_span
    };
    let required = estimate_steps(&p, options.trunc, span);
    if required > options.max_steps as f64 {
        return Err(Error::StepBudget { required, budget: options.max_steps as f64 });
    }
    let projector = CatProjector {
        basis: DressedBasis::new(&p, options.trunc)?,
        system: BlockSystem::new(n, &p, None)?,
        n,
    };
    let psi0 = projector.initial(options.initial);
    let times = uniform_times(0.0, span, periods as usize * options.samples_per_period);
    let control = StepControl::adaptive(options.tol).with_max_steps(options.max_steps);
    let traj = integrate_with(&p, options.trunc, &psi0, &times, control)?;
    report(resonance, gate, &p, &projector, &traj, options, span)
}

fn report(
    resonance: &ResonanceSolution,
    gate: RwaGate,
    params: &ModelParams,
    projector: &CatProjector,
    traj: &Trajectory,
    options: &CompareOptions,
    span: f64,
) -> Result<ComparisonReport> {
    let start = options.initial.block_index();
    let mut exact: [Vec<f64>; 4] = Default::default();
    let mut predicted: [Vec<f64>; 4] = Default::default();
    let mut averaged: [Vec<f64>; 4] = Default::default();
    let mut leakage = 0.0f64;
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let amp = projector.amplitudes(t, psi);
        leakage = leakage.max(1.0 - amp.norm_squared());
        let pred = gate_unitary(&gate, t).column(start).into_owned();
        let avg = averaged_propagator(&gate, t).column(start).into_owned();
        for (series, values) in [(&mut exact, amp), (&mut predicted, pred), (&mut averaged, avg)] {
            for (s, v) in series.iter_mut().zip(populations_in_cat_order(&values)) {
                s.push(v);
            }
        }
    }
    let k = options.initial.index();
    let relative = |reference: &[f64]| {
        let dev = exact[k].iter().zip(reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let lo = reference.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = reference.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > 1e-12 {
            dev / (hi - lo)
        } else {
            dev
        }
    };
    let amplitude_error = relative(&predicted[k]);
    let averaged_error = relative(&averaged[k]);
    let rate = gate.rabi_rate.abs();
    let (f_lo, f_hi) = if rate > 0.0 { (0.05 * rate, 5.0 * rate) } else { (2.0 * PI / span, 400.0 * PI / span) };
    let fit = fit_rabi(&traj.times, &exact[k], f_lo, f_hi);
    let phase_error = if rate > 0.0 { (fit.frequency - rate).abs() / rate } else { 0.0 };
    Ok(ComparisonReport {
        resonance: *resonance,
        gate,
        rabi_rate: gate.rabi_rate,
        amplitude_error,
        phase_error,
        fit,
        averaged_error,
        dropped_hf2_norm: dropped_norm(params, options.trunc, projector.n, 0.0)?,
        leakage,
        span,
        times: traj.times.clone(),
        exact,
        predicted,
        averaged,
        norm_drift: traj.norm_drift,
    })
}

/// Best `(A, B)` for fixed `f` and the resulting residual sum of squares.
fn linear_fit(times: &[f64], values: &[f64], f: f64) -> (f64, f64, f64) {
    let n = times.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in times.iter().zip(values) {
        let x = (f * t / 2.0).cos().powi(2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let det = n * sxx - sx * sx;
    let (a, b) = if det.abs() < 1e-14 * n * n { (0.0, sy / n) } else { ((n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det) };
    let rss = times
        .iter()
        .zip(values)
        .map(|(&t, &y)| (y - a * (f * t / 2.0).cos().powi(2) - b).powi(2))
        .sum();
    (a, b, rss)
}

/// Least-squares fit of `A cos^2(f t / 2) + B` with `f` in `[f_lo, f_hi]`: grid scan then
/// golden-section refinement around the best grid point.
pub fn fit_rabi(times: &[f64], values: &[f64], f_lo: f64, f_hi: f64) -> RabiFit {
    let grid = 2000;
    let cost = |f: f64| linear_fit(times, values, f).2;
    let step = (f_hi - f_lo) / grid as f64;
    let best = (0..=grid)
        .map(|i| f_lo + step * i as f64)
        .min_by(|a, b| cost(*a).total_cmp(&cost(*b)))
        .unwrap_or(f_lo);
    let (mut a, mut b) = ((best - step).max(f_lo), (best + step).min(f_hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..100 {
        if cost(c) < cost(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let frequency = 0.5 * (a + b);
    let (amplitude, offset, rss) = linear_fit(times, values, frequency);
    RabiFit { frequency, amplitude, offset, rms: (rss / times.len() as f64).sqrt() }
}
