//! Self-consistent drive frequency `omega_2` solving `alpha omega_2 + s_+ - s_- = 0`, where
//! `s_+-` are eigenvalues (`mu` or `nu`) of `(0 E_+-; E_+- gamma)` and `E_-` depends on
//! `omega_2` through `J_0(2 g2 / omega_2)`.

use super::two_level::{spectral_decompose, TwoLevelSpectral};
use crate::bessel::bessel_j;
use crate::bosonic::displaced_diag_element;
use crate::error::{invalid, Error, Result};
use crate::model::ModelParams;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Mu,
    Nu,
}

impl Branch {
    pub fn column(self) -> usize {
        match self {
            Branch::Mu => 0,
            Branch::Nu => 1,
        }
    }

    pub fn other(self) -> Branch {
        match self {
            Branch::Mu => Branch::Nu,
            Branch::Nu => Branch::Mu,
        }
    }

    pub fn pick(self, s: &TwoLevelSpectral) -> f64 {
        s.eigenvalue(self.column())
    }
}

/// Which eigenvalue of each branch enters the resonance condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResonanceTarget {
    pub plus: Branch,
    pub minus: Branch,
}

impl ResonanceTarget {
    /// `alpha omega_2 + mu_+ - mu_- = 0`
    pub const MU_MU: ResonanceTarget = ResonanceTarget { plus: Branch::Mu, minus: Branch::Mu };

    /// The target resonant at harmonic `-alpha` whenever this one is resonant at `alpha`.
    pub fn partner(self) -> ResonanceTarget {
        ResonanceTarget { plus: self.plus.other(), minus: self.minus.other() }
    }
}

impl Default for ResonanceTarget {
    fn default() -> Self {
        Self::MU_MU
    }
}

impl fmt::Display for ResonanceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |b: Branch| match b {
            Branch::Mu => "mu",
            Branch::Nu => "nu",
        };
        write!(f, "{}-{}", name(self.plus), name(self.minus))
    }
}

impl FromStr for ResonanceTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let branch = |p: &str| match p {
            "mu" => Ok(Branch::Mu),
            "nu" => Ok(Branch::Nu),
            _ => Err(invalid("target", format!("unknown branch `{p}` in `{s}` (expected mu or nu)"))),
        };
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| invalid("target", format!("`{s}` is not of the form mu-mu, mu-nu, nu-mu or nu-nu")))?;
        Ok(Self { plus: branch(a)?, minus: branch(b)? })
    }
}

/// Search bracket and scan density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceSearch {
    pub omega2_min: f64,
    pub omega2_max: f64,
    pub target: ResonanceTarget,
    /// Points of the uniform grid in `omega_2`.
    pub linear_points: usize,
    /// Spacing of the second grid, uniform in `Gamma_2 = 2 g2 / omega_2`.
    pub gamma_step: f64,
    /// Refuse brackets needing more evaluations than this.
    pub max_points: usize,
}

impl ResonanceSearch {
    pub fn new(omega2_min: f64, omega2_max: f64) -> Self {
        Self {
            omega2_min,
            omega2_max,
            target: ResonanceTarget::MU_MU,
            linear_points: 4000,
            gamma_step: 0.25,
            max_points: 20_000_000,
        }
    }

    pub fn with_target(mut self, target: ResonanceTarget) -> Self {
        self.target = target;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega2_min > 0.0 && self.omega2_max > self.omega2_min && self.omega2_max.is_finite()) {
            return Err(invalid("omega2", "bracket must satisfy 0 < omega2_min < omega2_max"));
        }
        if self.linear_points < 2 || !(self.gamma_step > 0.0) {
            return Err(invalid("omega2", "scan needs at least two points and a positive Gamma step"));
        }
        Ok(())
    }

    fn grid(&self, g2: f64) -> Result<Vec<f64>> {
        let (lo, hi) = (self.omega2_min, self.omega2_max);
        let mut pts: Vec<f64> = (0..self.linear_points)
            .map(|k| lo + (hi - lo) * k as f64 / (self.linear_points - 1) as f64)
            .collect();
        if g2 > 0.0 {
            let (gmin, gmax) = (2.0 * g2 / hi, 2.0 * g2 / lo);
            let count = ((gmax - gmin) / self.gamma_step).ceil();
            if count + pts.len() as f64 > self.max_points as f64 {
                return Err(invalid(
                    "omega2_min",
                    format!("scan would need {count:.3e} points; raise omega2_min or max_points"),
                ));
            }
            pts.extend((1..count as usize).map(|k| 2.0 * g2 / (gmin + k as f64 * self.gamma_step)));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts[0] = lo;
        *pts.last_mut().unwrap() = hi;
        Ok(pts)
    }
}

/// A root of the resonance condition with the spectral data recomputed at the root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceSolution {
    pub n: usize,
    pub alpha_harmonic: i32,
    pub omega2: f64,
    pub target: ResonanceTarget,
    pub spectral_plus: TwoLevelSpectral,
    pub spectral_minus: TwoLevelSpectral,
    /// `|alpha omega_2 + s_+ - s_-|` at the returned root.
    pub residual: f64,
}

impl ResonanceSolution {
    /// The model with `omega_2` set to the root.
    pub fn apply(&self, params: &ModelParams) -> ModelParams {
        params.with_drive_freq(1, self.omega2)
    }
}

/// Evaluates the condition for fixed model constants.
#[derive(Debug, Clone, Copy)]
struct Condition {
    prefactor: f64,
    j0_first: f64,
    g2: f64,
    gamma: f64,
    alpha: f64,
    target: ResonanceTarget,
}

impl Condition {
    fn new(n: usize, params: &ModelParams, alpha: i32, target: ResonanceTarget) -> Result<Self> {
        params.require_atoms("solve_resonance", 2)?;
        Ok(Self {
            prefactor: 0.5 * params.delta * displaced_diag_element(n, params.x()),
            j0_first: bessel_j(0, params.bessel_argument(0)),
            g2: params.g2,
            gamma: params.gamma(),
            alpha: alpha as f64,
            target,
        })
    }

    fn spectra(&self, omega2: f64) -> (TwoLevelSpectral, TwoLevelSpectral) {
        let j0 = bessel_j(0, 2.0 * self.g2 / omega2);
        let ep = self.prefactor * (self.j0_first + j0);
        let em = self.prefactor * (self.j0_first - j0);
        (spectral_decompose(ep, self.gamma), spectral_decompose(em, self.gamma))
    }

    fn eval(&self, omega2: f64) -> f64 {
        let (p, m) = self.spectra(omega2);
        self.alpha * omega2 + self.target.plus.pick(&p) - self.target.minus.pick(&m)
    }
}

/// `alpha omega_2 + s_+ - s_-` with both spectra evaluated at `omega2`.
pub fn resonance_residual(n: usize, params: &ModelParams, alpha: i32, target: ResonanceTarget, omega2: f64) -> Result<f64> {
    Ok(Condition::new(n, params, alpha, target)?.eval(omega2))
}

/// Every root in the bracket, ascending in `omega_2`.
pub fn solve_resonance(
    n: usize,
    params: &ModelParams,
    alpha: i32,
    search: &ResonanceSearch,
) -> Result<Vec<ResonanceSolution>> {
    if alpha == 0 {
        return Err(invalid("alpha", "harmonic index must be nonzero"));
    }
    search.validate()?;
    let cond = Condition::new(n, params, alpha, search.target)?;
    if params.delta == 0.0 {
        // E_+- vanish, every channel rate is zero and the blocks never couple
        return Err(Error::NoResonance("delta = 0 leaves the cat blocks uncoupled".into()));
    }
    let grid = search.grid(params.g2)?;
    let mut roots = Vec::new();
    let mut prev = (grid[0], cond.eval(grid[0]));
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for &w in &grid[1..] {
        let f = cond.eval(w);
        if f == 0.0 {
            roots.push(w);
        } else if prev.1 * f < 0.0 {
            roots.push(brent(|x| cond.eval(x), prev.0, w, prev.1, f));
        }
        prev = (w, f);
    }
    if roots.is_empty() {
        return Err(Error::NoResonance(format!(
            "alpha={alpha}, target {}: no sign change of the condition in omega2 in [{}, {}]",
            search.target, search.omega2_min, search.omega2_max
        )));
    }
    Ok(roots
        .into_iter()
        .map(|omega2| {
            let (p, m) = cond.spectra(omega2);
            ResonanceSolution {
                n,
                alpha_harmonic: alpha,
                omega2,
                target: search.target,
                spectral_plus: p,
                spectral_minus: m,
                residual: cond.eval(omega2).abs(),
            }
        })
        .collect())
}

/// Brent's method on a bracket with `fa fb < 0`, to machine precision.
fn brent(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb == 0.0 {
            return b;
        }
        let tol = 2.0 * f64::EPSILON * b.abs();
        if (b - a).abs() <= tol {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected { (s - b).abs() >= (b - c).abs() / 2.0 } else { (s - b).abs() >= (c - d).abs() / 2.0 };
        let tiny = if bisected { (b - c).abs() < tol } else { (c - d).abs() < tol };
        if outside || slow || tiny {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}
