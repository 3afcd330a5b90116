//! Runs the invariant suite on the configured model.

use super::Outcome;
use crate::checks::*;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Report};
use cavity_core::bosonic::FockTruncation;
use cavity_core::cat_frame::{e_delta, Sign};
use cavity_core::model::{key_formula_residual, AlgebraRep};
use cavity_core::rwa::{rwa_reduce, solve_resonance};
use cavity_core::Error as CoreError;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let status = if value <= tolerance { Status::Pass } else { Status::Fail };
        Check { name, status, value, tolerance, detail: detail.into() }
    }

    fn from_result(name: &'static str, tolerance: f64, detail: &str, r: cavity_core::Result<f64>) -> Self {
        match r {
            Ok(v) => Self::measured(name, v, tolerance, detail),
            Err(e) => Check { name, status: Status::Fail, value: f64::NAN, tolerance, detail: e.to_string() },
        }
    }

    fn skipped(name: &'static str, tolerance: f64, detail: impl Into<String>) -> Self {
        Check { name, status: Status::Skip, value: f64::NAN, tolerance, detail: detail.into() }
    }
}

/// Every check with its measured value. Fails only on configuration problems.
pub fn run_checks(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let params = cfg.model_params()?;
    let trunc = cfg.truncation()?;
    let m = params.m();
    let mut checks = Vec::new();

    let s = trunc.soundness(params.theta_max());
    let ratio = (s.occupation / s.occupation_limit).max(if s.buffer == 0 {
        if s.buffer_needed > 0.0 { f64::INFINITY } else { 0.0 }
    } else {
        s.buffer_needed / s.buffer as f64
    });
    checks.push(Check::measured(
        "truncation_soundness",
        ratio,
        1.0,
        format!(
            "theta_max={} n_max={} occupation={}/{} buffer_needed={}/{}",
            s.theta_max, s.n_max, s.occupation, s.occupation_limit, s.buffer_needed, s.buffer
        ),
    ));

    checks.push(Check::from_result(
        "key_formula_n",
        KEY_FORMULA_N_TOL,
        "Lambda in -m..=m on the trusted block",
        key_formula_n(&params, trunc),
    ));

    let spins = (|| {
        let mut worst = 0.0f64;
        for twice_spin in 1..=4 {
            for lambda in (-(m as i32)..=m as i32).filter(|l| *l != 0) {
                worst = worst.max(key_formula_residual(&AlgebraRep::J { twice_spin }, params.omega, params.g1, lambda)?);
            }
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("key_formula_j", KEY_FORMULA_J_TOL, "j in 1/2..2, Lambda != 0", spins));

    let k_lambdas: Vec<i32> = (-(m as i32)..=m as i32)
        .filter(|&l| l != 0 && (2.0 * params.g1 * l as f64 / params.omega).abs() <= 0.6)
        .collect();
    if k_lambdas.is_empty() {
        checks.push(Check::skipped("key_formula_k", KEY_FORMULA_K_TOL, "no Lambda with |2 g1 Lambda / omega| <= 0.6"));
    } else {
        let series = (|| {
            let rep_trunc = FockTruncation::new(64, 40)?;
            let mut worst = 0.0f64;
            for bargmann in [0.5, 1.0, 1.5] {
                for &lambda in &k_lambdas {
                    let rep = AlgebraRep::K { bargmann, trunc: rep_trunc };
                    worst = worst.max(key_formula_residual(&rep, params.omega, params.g1, lambda)?);
                }
            }
            Ok(worst)
        })();
        checks.push(Check::from_result("key_formula_k", KEY_FORMULA_K_TOL, "Bargmann index 1/2..3/2, 64 levels", series));
    }

    let n_max = (trunc.trusted() - 1).min(10);
    let xs = [params.x(), -params.x(), params.theta_max()];
    match displaced_element(trunc, n_max, &xs) {
        Ok((err, sym)) => {
            checks.push(Check::measured("displaced_element", err, DISPLACED_TOL, format!("n <= {n_max}")));
            checks.push(Check::measured("displaced_symmetry", sym, SYMMETRY_TOL, "x -> -x"));
        }
        Err(e) => {
            for (name, tol) in [("displaced_element", DISPLACED_TOL), ("displaced_symmetry", SYMMETRY_TOL)] {
                checks.push(Check { name, status: Status::Fail, value: f64::NAN, tolerance: tol, detail: e.to_string() });
            }
        }
    }

    let t_end = 50.0 / params.omega;
    let times: Vec<f64> = (0..=4).map(|k| t_end * k as f64 / 4.0).collect();
    let e_max = params.omega * trunc.trusted() as f64 + params.omega * params.theta_max().powi(2) + m as f64 * params.g2 + 1.0;
    match u0_residuals(&params, trunc, &times, 0.02 / e_max) {
        Ok((ode, unit)) => {
            checks.push(Check::measured("u0_ode", ode, U0_ODE_TOL, format!("t omega <= 50, {} times", times.len())));
            checks.push(Check::measured("u0_unitarity", unit, U0_UNITARITY_TOL, "trusted dressed block"));
        }
        Err(e) => {
            for (name, tol) in [("u0_ode", U0_ODE_TOL), ("u0_unitarity", U0_UNITARITY_TOL)] {
                checks.push(Check { name, status: Status::Fail, value: f64::NAN, tolerance: tol, detail: e.to_string() });
            }
        }
    }

    let hf = (|| {
        let mut worst = 0.0f64;
        for t in [0.0, 0.7, 13.1, 41.9] {
            worst = worst.max(hf_residual(&params, trunc, t / params.omega)?);
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("hf_equivalence", HF_TOL, "closed form vs conjugation, 4 times", hf));

    resonance_checks(cfg, &mut checks)?;

    let (alpha, theta) = if m == 2 {
        (e_delta(cfg.resonance.n, &params, Sign::Plus)?, params.gamma())
    } else {
        (params.delta / 2.0, params.gamma())
    };
    let (mut ode, mut unit, mut rabi) = (0.0f64, 0.0f64, 0.0f64);
    for t in [0.5, 7.0, 50.0] {
        let (o, u, r) = appendix_residuals(alpha, theta, t / params.omega);
        ode = ode.max(o);
        unit = unit.max(u);
        rabi = rabi.max(r);
    }
    let detail = format!("a={} theta={}", format_float(alpha), format_float(theta));
    checks.push(Check::measured("appendix_ode", ode, APPENDIX_ODE_TOL, detail.clone()));
    checks.push(Check::measured("appendix_unitarity", unit, APPENDIX_UNITARITY_TOL, detail.clone()));
    checks.push(Check::measured("appendix_rabi_form", rabi, RABI_FORM_TOL, detail));
    Ok(checks)
}

fn resonance_checks(cfg: &RunConfig, checks: &mut Vec<Check>) -> CliResult<()> {
    const NAMES: [(&str, f64); 4] = [
        ("resonance_residual", RESONANCE_TOL),
        ("projector_identities", PROJECTOR_TOL),
        ("gate_expm", GATE_TOL),
        ("gate_identity", 0.0),
    ];
    let params = cfg.model_params()?;
    if params.m() != 2 {
        for (name, tol) in NAMES {
            checks.push(Check::skipped(name, tol, "resonances need two atoms"));
        }
        return Ok(());
    }
    let search = cfg.search(cfg.resonance.target);
    let mut roots = Vec::new();
    let mut reasons = Vec::new();
    for &alpha in &cfg.resonance.alphas {
        match solve_resonance(cfg.resonance.n, &params, alpha, &search) {
            Ok(r) => roots.extend(r),
            Err(CoreError::NoResonance(msg)) => reasons.push(msg),
            Err(e) => return Err(e.into()),
        }
    }
    if roots.is_empty() {
        for (name, tol) in NAMES {
            checks.push(Check::skipped(name, tol, format!("no roots: {}", reasons.join("; "))));
        }
        return Ok(());
    }
    let (mut res, mut proj, mut gate_err, mut identity) = (0.0f64, 0.0f64, 0.0f64, true);
    for root in &roots {
        res = res.max(root.residual);
        let gate = rwa_reduce(cfg.resonance.n, &params, root)?;
        proj = proj.max(resonance_projector_residual(root, &gate));
        let period = if gate.rabi_rate != 0.0 { std::f64::consts::TAU / gate.rabi_rate.abs() } else { 1.0 };
        for frac in [0.1, 0.5, 1.0, 2.5] {
            let (err, id) = gate_residual(&gate, frac * period);
            gate_err = gate_err.max(err);
            identity &= id;
        }
    }
    let detail = format!("{} root(s)", roots.len());
    checks.push(Check::measured("resonance_residual", res, RESONANCE_TOL, detail.clone()));
    checks.push(Check::measured("projector_identities", proj, PROJECTOR_TOL, detail.clone()));
    checks.push(Check::measured("gate_expm", gate_err, GATE_TOL, detail.clone()));
    checks.push(Check::measured("gate_identity", if identity { 0.0 } else { 1.0 }, 0.0, "gate(0) == I exactly"));
    Ok(())
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let checks = run_checks(cfg)?;
    let mut report = Report::new("verify", &["check", "status", "value", "tolerance", "detail"]);
    for c in &checks {
        report.push(vec![c.name.into(), c.status.as_str().into(), c.value.into(), c.tolerance.into(), c.detail.clone().into()]);
    }
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    report.insert("passed", &(failed == 0));
    let failure = (failed > 0).then_some(CliError::ChecksFailed { failed, total: checks.len() });
    Ok(Outcome { report, failure })
}
