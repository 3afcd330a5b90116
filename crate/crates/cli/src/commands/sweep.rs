//! Resonance summaries over a one-parameter family of models, one worker per point.

use super::Outcome;
use crate::config::{with_parameter, RawConfig, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Report;
use cavity_core::cat_frame::{e_delta, Sign};
use cavity_core::rwa::{rwa_reduce, solve_resonance};
use cavity_core::Error as CoreError;
use rayon::prelude::*;
use serde::Serialize;

/// Worker-pool size for sweeps; unset means the available parallelism.
pub const WORKERS_ENV: &str = "CAVITY_WORKERS";

pub const COLUMNS: [&str; 12] = [
    "index",
    "value",
    "alpha",
    "coupling_ratio",
    "e_plus",
    "e_minus",
    "roots",
    "omega2_first",
    "omega2_last",
    "max_residual",
    "rabi_rate",
    "partner_rate",
];

#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub index: usize,
    pub value: f64,
    pub alpha: i32,
    pub coupling_ratio: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub roots: usize,
    pub omega2_first: f64,
    pub omega2_last: f64,
    pub max_residual: f64,
    /// At the last root.
    pub rabi_rate: f64,
    pub partner_rate: f64,
}

pub fn workers() -> CliResult<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Core(CoreError::InvalidParameter {
                name: "CAVITY_WORKERS",
                reason: format!("`{v}` is not a positive integer"),
            })),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn point(raw: &RawConfig, base: &RunConfig, index: usize, value: f64) -> CliResult<Vec<PointSummary>> {
    let cfg = RunConfig::from_raw(&with_parameter(raw, base, &base.sweep.parameter, value))?;
    let params = cfg.model_params()?;
    let n = cfg.resonance.n;
    let (e_plus, e_minus) = (e_delta(n, &params, Sign::Plus)?, e_delta(n, &params, Sign::Minus)?);
    let search = cfg.search(cfg.resonance.target);
    let mut out = Vec::new();
    for &alpha in &cfg.resonance.alphas {
        let mut s = PointSummary {
            index,
            value,
            alpha,
            coupling_ratio: params.coupling_ratio(),
            e_plus,
            e_minus,
            roots: 0,
            omega2_first: f64::NAN,
            omega2_last: f64::NAN,
            max_residual: f64::NAN,
            rabi_rate: f64::NAN,
            partner_rate: f64::NAN,
        };
        match solve_resonance(n, &params, alpha, &search) {
            Ok(roots) => {
                let last = roots[roots.len() - 1];
                let gate = rwa_reduce(n, &params, &last)?;
                s.roots = roots.len();
                s.omega2_first = roots[0].omega2;
                s.omega2_last = last.omega2;
                s.max_residual = roots.iter().map(|r| r.residual).fold(0.0, f64::max);
                s.rabi_rate = gate.rabi_rate;
                s.partner_rate = gate.partner.map_or(f64::NAN, |c| c.rate);
            }
            Err(CoreError::NoResonance(_)) => {}
            Err(e) => return Err(e.into()),
        }
        out.push(s);
    }
    Ok(out)
}

pub fn run(raw: &RawConfig, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.model_params()?.require_atoms("sweep", 2)?;
    let w = &cfg.sweep;
    let values: Vec<f64> = (0..w.steps).map(|k| w.start + (w.end - w.start) * k as f64 / (w.steps - 1) as f64).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers()?)
        .build()
        .map_err(|e| CliError::io("worker pool", e))?;
    let results: Vec<CliResult<Vec<PointSummary>>> =
        pool.install(|| values.par_iter().enumerate().map(|(i, &v)| point(raw, cfg, i, v)).collect());
    let mut summaries = Vec::new();
    for r in results {
        summaries.extend(r?);
    }
    let mut report = Report::new("sweep", &COLUMNS);
    report.comment("parameter", w.parameter.clone());
    for s in &summaries {
        report.push(vec![
            s.index.into(),
            s.value.into(),
            s.alpha.into(),
            s.coupling_ratio.into(),
            s.e_plus.into(),
            s.e_minus.into(),
            s.roots.into(),
            s.omega2_first.into(),
            s.omega2_last.into(),
            s.max_residual.into(),
            s.rabi_rate.into(),
            s.partner_rate.into(),
        ]);
    }
    report.insert("parameter", &w.parameter);
    report.insert("points", &summaries);
    Ok(report.into())
}
