//! Exact integration of the lab-frame Schrödinger equation from a dressed or cat state.

use super::Outcome;
use crate::config::{InitialState, RunConfig};
use crate::error::CliResult;
use crate::output::{Cell, Report};
use cavity_core::cat_frame::{cat_basis, cat_transform};
use cavity_core::linalg::CVector;
use cavity_core::model::dressed_state;
use cavity_core::propagator::{integrate, uniform_times, InteractionFrame};
use cavity_core::spin::SpinLabel;

fn label_name(label: &SpinLabel) -> String {
    label.lambdas().iter().map(|&l| if l > 0 { '+' } else { '-' }).collect()
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let params = cfg.model_params()?;
    let trunc = cfg.truncation()?;
    let s = &cfg.simulate;
    let level = s.level;
    let psi0: CVector = match &s.initial {
        InitialState::Cat(k) => cat_basis(level, &params, trunc)?[k - 1].vector.clone(),
        InitialState::Dressed(l) => dressed_state(&SpinLabel::new(l.clone())?, level, &params, trunc)?.vector,
    };
    let times = uniform_times(s.t_start, s.t_end, s.samples - 1);
    let traj = integrate(&params, trunc, &psi0, &times, s.tol)?;
    let frame = InteractionFrame::new(&params, trunc)?;
    let basis = frame.basis();
    let labels: Vec<SpinLabel> = basis.labels().to_vec();
    let cats = params.m() == 2;

    let mut header: Vec<String> = ["t", "norm", "photons", "trusted_population"].iter().map(|s| s.to_string()).collect();
    header.extend(labels.iter().map(|l| format!("p_{}", label_name(l))));
    if cats {
        header.extend((1..=4).map(|k| format!("p_phi{k}")));
    }
    let dim = trunc.dim();
    let size = psi0.len();
    if s.export_state {
        for i in 0..size {
            header.push(format!("re_{i}"));
            header.push(format!("im_{i}"));
        }
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut report = Report::new("simulate", &header_refs);
    let tr = cat_transform();

    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let photons: f64 = psi.iter().enumerate().map(|(i, z)| z.norm_sqr() * (i % dim) as f64).sum();
        let c = frame.to_frame(t, psi);
        let trusted: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let mut row: Vec<Cell> = vec![t.into(), psi.norm().into(), photons.into(), trusted.into()];
        for li in 0..labels.len() {
            row.push(c[basis.index(li, level)].norm_sqr().into());
        }
        if cats {
            for k in 0..4 {
                let amp: cavity_core::linalg::C64 = (0..4).map(|i| c[basis.index(i, level)] * tr[(k, i)]).sum();
                row.push(amp.norm_sqr().into());
            }
        }
        if s.export_state {
            for z in psi.iter() {
                row.push(z.re.into());
                row.push(z.im.into());
            }
        }
        report.push(row);
    }
    report.insert("trajectory", &traj);
    report.insert("level", &level);
    report.insert("initial", &s.initial.to_string());
    Ok(report.into())
}
