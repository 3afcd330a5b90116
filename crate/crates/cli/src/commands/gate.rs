//! The RWA gate at one solved resonance, optionally checked against exact integration.

use super::Outcome;
use crate::config::{RootChoice, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Cell, Report};
use cavity_core::cat_frame::CatIndex;
use cavity_core::propagator::{compare_rwa, uniform_times, CompareOptions};
use cavity_core::rwa::{gate_unitary, rwa_reduce, solve_resonance};
use nalgebra::Matrix4;
use serde::Serialize;
use std::f64::consts::TAU;

pub const COLUMNS: [&str; 10] = ["t", "row", "re0", "im0", "re1", "im1", "re2", "im2", "re3", "im3"];

#[derive(Serialize)]
struct Sample {
    t: f64,
    /// Row-major `[re, im]` pairs in block order `(c1, c3, c2, c4)`.
    unitary: Vec<Vec<[f64; 2]>>,
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(" ")
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let params = cfg.model_params()?;
    params.require_strong_coupling()?;
    let g = &cfg.gate;
    let n = cfg.resonance.n;
    let roots = solve_resonance(n, &params, g.alpha, &cfg.search(g.target))?;
    let root = match g.root {
        RootChoice::First => roots[0],
        RootChoice::Last => roots[roots.len() - 1],
        RootChoice::Index(i) => *roots
            .get(i)
            .ok_or_else(|| CliError::NoResult(format!("root index {i} requested, {} root(s) found", roots.len())))?,
    };
    let gate = rwa_reduce(n, &params, &root)?;
    let t_end = match g.t_end {
        Some(t) => t,
        None if gate.rabi_rate != 0.0 => g.t_start + TAU / gate.rabi_rate.abs(),
        None => {
            return Err(CliError::NoResult(format!(
                "rabi rate vanishes at omega2={} (alpha={}); set gate.t_end explicitly",
                root.omega2, g.alpha
            )))
        }
    };
    let times = if g.samples == 1 { vec![g.t_start] } else { uniform_times(g.t_start, t_end, g.samples - 1) };

    let mut report = Report::new("gate", &COLUMNS);
    report.comment("omega2", format_float(root.omega2));
    report.comment("alpha", g.alpha.to_string());
    report.comment("target", g.target.to_string());
    report.comment("rabi_rate", format_float(gate.rabi_rate));
    report.comment("k", list(gate.k.transpose().as_slice()));
    if let Some(p) = gate.partner {
        report.comment("partner_target", p.target.to_string());
        report.comment("partner_rate", format_float(p.rate));
    }

    let mut samples = Vec::new();
    for &t in &times {
        let u: Matrix4<_> = gate_unitary(&gate, t);
        let mut rows = Vec::new();
        for r in 0..4 {
            let mut cells: Vec<Cell> = vec![t.into(), r.into()];
            let mut row = Vec::new();
            for col in 0..4 {
                let z = u[(r, col)];
                cells.push(z.re.into());
                cells.push(z.im.into());
                row.push([z.re, z.im]);
            }
            report.push(cells);
            rows.push(row);
        }
        samples.push(Sample { t, unitary: rows });
    }
    report.insert("resonance", &root);
    report.insert("gate", &gate);
    report.insert("samples", &samples);

    if g.compare {
        let mut opts = CompareOptions::new(cfg.truncation()?);
        opts.tol = g.tol;
        opts.samples_per_period = g.samples_per_period;
        opts.max_steps = g.max_steps;
        opts.initial = CatIndex::Phi1;
        let cmp = compare_rwa(&params, &root, n, g.periods, &opts)?;
        report.comment("amplitude_error", format_float(cmp.amplitude_error));
        report.comment("phase_error", format_float(cmp.phase_error));
        report.comment("fit_frequency", format_float(cmp.fit.frequency));
        report.comment("averaged_error", format_float(cmp.averaged_error));
        report.comment("dropped_hf2_norm", format_float(cmp.dropped_hf2_norm));
        report.comment("leakage", format_float(cmp.leakage));
        report.comment("norm_drift", format_float(cmp.norm_drift));
        report.insert("comparison", &cmp);
    }
    Ok(report.into())
}
