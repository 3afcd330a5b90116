//! Every root of the resonance condition for each configured harmonic.

use super::Outcome;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Report;
use cavity_core::rwa::{rwa_reduce, solve_resonance, ResonanceSolution};
use cavity_core::Error as CoreError;

pub const COLUMNS: [&str; 14] = [
    "n",
    "alpha",
    "target",
    "omega2",
    "residual",
    "e_plus",
    "mu_plus",
    "nu_plus",
    "e_minus",
    "mu_minus",
    "nu_minus",
    "gamma",
    "rabi_rate",
    "partner_rate",
];

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let params = cfg.model_params()?;
    let search = cfg.search(cfg.resonance.target);
    let mut report = Report::new("resonance", &COLUMNS);
    let mut roots: Vec<ResonanceSolution> = Vec::new();
    let mut misses = Vec::new();
    for &alpha in &cfg.resonance.alphas {
        match solve_resonance(cfg.resonance.n, &params, alpha, &search) {
            Ok(r) => roots.extend(r),
            Err(CoreError::NoResonance(msg)) => misses.push(msg),
            Err(e) => return Err(e.into()),
        }
    }
    let mut gates = Vec::new();
    for r in &roots {
        let gate = rwa_reduce(cfg.resonance.n, &params, r)?;
        let (p, m) = (&r.spectral_plus, &r.spectral_minus);
        report.push(vec![
            r.n.into(),
            r.alpha_harmonic.into(),
            r.target.to_string().into(),
            r.omega2.into(),
            r.residual.into(),
            p.alpha.into(),
            p.mu.into(),
            p.nu.into(),
            m.alpha.into(),
            m.mu.into(),
            m.nu.into(),
            p.theta.into(),
            gate.rabi_rate.into(),
            gate.partner.map_or(0.0, |c| c.rate).into(),
        ]);
        gates.push(gate);
    }
    report.insert("solutions", &roots);
    report.insert("gates", &gates);
    report.insert("misses", &misses);
    let failure = roots.is_empty().then(|| CliError::NoResult(misses.join("; ")));
    Ok(Outcome { report, failure })
}
