//! Dormand-Prince 5(4) pair on complex state vectors.

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};
use serde::Serialize;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Drift beyond which the state is renormalized.
pub const RENORM_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    /// Bound on the max-norm local error estimate of each accepted step.
    pub tol: f64,
    /// Give up after this many attempted steps.
    pub max_steps: usize,
    /// Fixed step instead of error control (for convergence-order checks).
    pub fixed_step: Option<f64>,
    /// Apply the renormalization policy.
    pub renormalize: bool,
}

impl StepControl {
    pub fn adaptive(tol: f64) -> Self {
        Self { tol, max_steps: 50_000_000, fixed_step: None, renormalize: true }
    }

    /// Fixed step without renormalization.
    pub fn fixed(h: f64) -> Self {
        Self { tol: f64::INFINITY, max_steps: usize::MAX, fixed_step: Some(h), renormalize: false }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self.fixed_step {
            Some(h) if !(h > 0.0 && h.is_finite()) => Err(crate::error::invalid("step", "fixed step must be positive")),
            None if !(1e-12..=1e-6).contains(&self.tol) => {
                Err(crate::error::invalid("tol", format!("tolerance {} outside [1e-12, 1e-6]", self.tol)))
            }
            _ => Ok(()),
        }
    }
}

/// A renormalization performed because the norm drifted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Renormalization {
    pub t: f64,
    pub drift: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub renormalizations: Vec<Renormalization>,
    /// Largest `| ||psi|| - 1 |` seen before any renormalization.
    pub max_raw_drift: f64,
}

/// Integrates `dy/dt = f(t, y)` and records `y` at each of `times` (strictly increasing,
/// `times[0]` is the initial time). Steps are clipped to land on every sample time.
pub fn solve<F>(mut f: F, y0: &CVector, times: &[f64], control: StepControl) -> Result<(Vec<CVector>, Stats)>
where
    F: FnMut(f64, &CVector, &mut CVector),
{
    control.validate()?;
    check_times(times)?;
    let n = y0.len();
    let mut k: Vec<CVector> = (0..7).map(|_| CVector::zeros(n)).collect();
    let mut tmp = CVector::zeros(n);
    let mut scratch = CVector::zeros(n);
    let mut y = y0.clone();
    let mut stats = Stats::default();
    let mut out = Vec::with_capacity(times.len());
    out.push(y.clone());
    let mut t = times[0];
    let span = times[times.len() - 1] - t;
    let mut h = control.fixed_step.unwrap_or_else(|| (span * 1e-3).min(0.01).max(1e-6));
    f(t, &y, &mut k[0]);
    let mut attempts = 0usize;
    for &target in &times[1..] {
        while t < target {
            attempts += 1;
            if attempts > control.max_steps {
                return Err(Error::StepBudget { required: attempts as f64, budget: control.max_steps as f64 });
            }
            let remaining = target - t;
            // never leave a sliver behind the sample time
            let last = remaining <= h * (1.0 + 1e-8);
            let step = if last { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t, h: step });
            }
            let err = stage(&mut f, t, step, &y, &mut k, &mut scratch, &mut tmp);
            let err = err / control.tol;
            if control.fixed_step.is_some() || err <= 1.0 {
                std::mem::swap(&mut y, &mut tmp);
                k.swap(0, 6);
                t = if last { target } else { t + step };
                stats.accepted += 1;
                let norm = y.norm();
                let drift = (norm - 1.0).abs();
                stats.max_raw_drift = stats.max_raw_drift.max(drift);
                if control.renormalize && drift > RENORM_THRESHOLD {
                    y.unscale_mut(norm);
                    f(t, &y, &mut k[0]);
                    stats.renormalizations.push(Renormalization { t, drift });
                }
            } else {
                stats.rejected += 1;
            }
            if control.fixed_step.is_none() {
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a clipped step says nothing about the natural step size
                if !(last && err <= 1.0) {
                    h = step * factor;
                } else if factor < 1.0 {
                    h = h.min(step * factor);
                }
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(crate::error::invalid("times", "need at least an initial and a final time"));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::error::invalid("times", "sample times must be finite and strictly increasing"));
    }
    Ok(())
}

fn axpy(out: &mut CVector, y: &CVector, h: f64, terms: &[(f64, &CVector)]) {
    out.copy_from(y);
    for &(a, k) in terms {
        if a != 0.0 {
            out.axpy(C64::new(h * a, 0.0), k, C64::new(1.0, 0.0));
        }
    }
}

/// One Dormand-Prince step from `(t, y)` with `k[0] = f(t, y)`. Leaves the fifth-order result in
/// `y_new`, `f(t + h, y_new)` in `k[6]`, and returns the max-norm error estimate.
fn stage<F>(f: &mut F, t: f64, h: f64, y: &CVector, k: &mut [CVector], ys: &mut CVector, y_new: &mut CVector) -> f64
where
    F: FnMut(f64, &CVector, &mut CVector),
{
    axpy(ys, y, h, &[(A21, &k[0])]);
    f(t + C2 * h, ys, &mut k[1]);
    axpy(ys, y, h, &[(A31, &k[0]), (A32, &k[1])]);
    f(t + C3 * h, ys, &mut k[2]);
    axpy(ys, y, h, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
    f(t + C4 * h, ys, &mut k[3]);
    axpy(ys, y, h, &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])]);
    f(t + C5 * h, ys, &mut k[4]);
    axpy(ys, y, h, &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])]);
    f(t + h, ys, &mut k[5]);
    axpy(y_new, y, h, &[(B1, &k[0]), (B3, &k[2]), (B4, &k[3]), (B5, &k[4]), (B6, &k[5])]);
    let (head, tail) = k.split_at_mut(6);
    f(t + h, y_new, &mut tail[0]);
    let mut err = 0.0f64;
    for i in 0..y.len() {
        let e = head[0][i] * E1 + head[2][i] * E3 + head[3][i] * E4 + head[4][i] * E5 + head[5][i] * E6 + tail[0][i] * E7;
        err = err.max(e.norm());
    }
    err * h
}
