//! Flat `section.key = value` run configuration.
//!
//! Grammar: one assignment per line, `#` starts a comment, blank lines are ignored. Keys are
//! dotted paths from [`KEYS`]; list values are comma separated. Every key may appear at most once.

use cavity_core::bosonic::FockTruncation;
use cavity_core::model::{Algebra, ModelParams};
use cavity_core::rwa::{ResonanceSearch, ResonanceTarget};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Every accepted key with its default (`None`: required).
pub const KEYS: &[(&str, Option<&str>)] = &[
    ("model.omega", None),
    ("model.g1", None),
    ("model.delta", None),
    ("model.atoms", None),
    ("model.g2", Some("0")),
    ("model.drive_freqs", Some("auto")),
    ("model.drive_phases", Some("auto")),
    ("model.algebra", Some("N")),
    ("model.strong_ratio", Some("10")),
    ("truncation.dim", None),
    ("truncation.buffer", Some("auto")),
    ("resonance.n", Some("0")),
    ("resonance.alpha", Some("1")),
    ("resonance.target", Some("mu-mu")),
    ("resonance.omega2_min", Some("0.01")),
    ("resonance.omega2_max", Some("2")),
    ("resonance.linear_points", Some("4000")),
    ("resonance.gamma_step", Some("0.25")),
    ("resonance.max_points", Some("20000000")),
    ("simulate.initial", Some("cat:1")),
    ("simulate.level", Some("0")),
    ("simulate.t_start", Some("0")),
    ("simulate.t_end", Some("50")),
    ("simulate.samples", Some("100")),
    ("simulate.tol", Some("1e-9")),
    ("simulate.export_state", Some("false")),
    ("gate.alpha", Some("1")),
    ("gate.target", Some("mu-mu")),
    ("gate.root", Some("last")),
    ("gate.t_start", Some("0")),
    ("gate.t_end", Some("auto")),
    ("gate.samples", Some("8")),
    ("gate.compare", Some("false")),
    ("gate.periods", Some("1")),
    ("gate.samples_per_period", Some("64")),
    ("gate.tol", Some("1e-9")),
    ("gate.max_steps", Some("50000000")),
    ("sweep.parameter", Some("model.g2")),
    ("sweep.start", Some("0.01")),
    ("sweep.end", Some("0.1")),
    ("sweep.steps", Some("10")),
    ("output.format", Some("csv")),
    ("output.path", Some("-")),
];

/// Sweepable keys besides indexed list entries `model.drive_freqs.<j>` and `model.drive_phases.<j>`.
pub const SWEEP_SCALARS: &[&str] = &["model.omega", "model.g1", "model.g2", "model.delta", "model.strong_ratio"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldErrorKind {
    Syntax,
    UnknownKey,
    DuplicateKey,
    MissingKey,
    Invalid,
    Range,
}

impl fmt::Display for FieldErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FieldErrorKind::Syntax => "syntax",
            FieldErrorKind::UnknownKey => "unknown_key",
            FieldErrorKind::DuplicateKey => "duplicate_key",
            FieldErrorKind::MissingKey => "missing_key",
            FieldErrorKind::Invalid => "invalid",
            FieldErrorKind::Range => "range",
        };
        f.write_str(s)
    }
}

/// One problem with one key. `line` is 1-based; `None` for missing keys and `--set` overrides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldError {
    pub kind: FieldErrorKind,
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {} `{}`: {}", self.kind, self.key, self.message),
            None => write!(f, "{} `{}`: {}", self.kind, self.key, self.message),
        }
    }
}

/// Key-value pairs with their source lines, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

fn is_known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, Vec<FieldError>> {
        let mut raw = RawConfig::default();
        let mut errors = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                errors.push(FieldError {
                    kind: FieldErrorKind::Syntax,
                    key: content.to_string(),
                    line: Some(lineno),
                    message: "expected `key = value`".into(),
                });
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if !is_known(key) {
                errors.push(FieldError {
                    kind: FieldErrorKind::UnknownKey,
                    key: key.into(),
                    line: Some(lineno),
                    message: "not a configuration key".into(),
                });
            } else if let Some((_, Some(first))) = raw.entries.get(key) {
                errors.push(FieldError {
                    kind: FieldErrorKind::DuplicateKey,
                    key: key.into(),
                    line: Some(lineno),
                    message: format!("already set on line {first}"),
                });
            } else {
                raw.entries.insert(key.into(), (value.into(), Some(lineno)));
            }
        }
        if errors.is_empty() {
            Ok(raw)
        } else {
            Err(errors)
        }
    }

    /// Applies `key=value` overrides; an override replaces the file's value.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<(), Vec<FieldError>> {
        let mut errors = Vec::new();
        for o in overrides {
            let o = o.as_ref();
            match o.split_once('=') {
                Some((k, v)) if is_known(k.trim()) => {
                    self.entries.insert(k.trim().into(), (v.trim().into(), None));
                }
                Some((k, _)) => errors.push(FieldError {
                    kind: FieldErrorKind::UnknownKey,
                    key: k.trim().into(),
                    line: None,
                    message: "not a configuration key (from --set)".into(),
                }),
                None => errors.push(FieldError {
                    kind: FieldErrorKind::Syntax,
                    key: o.into(),
                    line: None,
                    message: "--set expects key=value".into(),
                }),
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.entries.insert(key.into(), (value, None));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Which solved root the gate command uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootChoice {
    First,
    Last,
    Index(usize),
}

impl FromStr for RootChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "first" => Ok(RootChoice::First),
            "last" => Ok(RootChoice::Last),
            _ => s.parse().map(RootChoice::Index).map_err(|_| format!("`{s}` is not first, last or a root index")),
        }
    }
}

impl fmt::Display for RootChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootChoice::First => f.write_str("first"),
            RootChoice::Last => f.write_str("last"),
            RootChoice::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Initial state of `simulate`: a cat state (two atoms) or a dressed product state, at
/// `simulate.level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum InitialState {
    Cat(usize),
    Dressed(Vec<i8>),
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| format!("`{s}` is not cat:<1-4> or dressed:<+-1,...>"))?;
        match kind.trim() {
            "cat" => match arg.trim().parse::<usize>() {
                Ok(k) if (1..=4).contains(&k) => Ok(InitialState::Cat(k)),
                _ => Err(format!("cat index `{arg}` outside 1..=4")),
            },
            "dressed" => arg
                .split(',')
                .map(|v| match v.trim() {
                    "1" | "+1" => Ok(1),
                    "-1" => Ok(-1),
                    other => Err(format!("spin label entry `{other}` is not +1 or -1")),
                })
                .collect::<Result<Vec<i8>, _>>()
                .map(InitialState::Dressed),
            other => Err(format!("unknown initial state kind `{other}`")),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Cat(k) => write!(f, "cat:{k}"),
            InitialState::Dressed(l) => {
                let parts: Vec<String> = l.iter().map(|v| if *v > 0 { "+1".into() } else { "-1".into() }).collect();
                write!(f, "dressed:{}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSection {
    pub omega: f64,
    pub g1: f64,
    pub g2: f64,
    pub delta: f64,
    pub atoms: usize,
    pub drive_freqs: Vec<f64>,
    pub drive_phases: Vec<f64>,
    pub algebra: Algebra,
    pub strong_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSection {
    pub dim: usize,
    /// `None`: `ceil(dim / 4)`.
    pub buffer: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceSection {
    pub n: usize,
    pub alphas: Vec<i32>,
    pub target: ResonanceTarget,
    pub omega2_min: f64,
    pub omega2_max: f64,
    pub linear_points: usize,
    pub gamma_step: f64,
    pub max_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateSection {
    pub initial: InitialState,
    pub level: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    pub tol: f64,
    pub export_state: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateSection {
    pub alpha: i32,
    pub target: ResonanceTarget,
    pub root: RootChoice,
    pub t_start: f64,
    /// `None`: one period `2 pi / |R|` after `t_start`.
    pub t_end: Option<f64>,
    pub samples: usize,
    pub compare: bool,
    pub periods: u32,
    pub samples_per_period: usize,
    pub tol: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSection {
    pub parameter: String,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSection {
    pub format: Format,
    /// `-` is standard output.
    pub path: String,
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelSection,
    pub truncation: TruncationSection,
    pub resonance: ResonanceSection,
    pub simulate: SimulateSection,
    pub gate: GateSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

/// Typed access to a raw config that collects every error instead of stopping at the first.
struct Reader<'a> {
    raw: &'a RawConfig,
    errors: Vec<FieldError>,
}

impl<'a> Reader<'a> {
    fn value(&mut self, key: &'static str) -> Option<(&'a str, Option<usize>)> {
        if let Some((v, line)) = self.raw.entries.get(key) {
            return Some((v.as_str(), *line));
        }
        match KEYS.iter().find(|(k, _)| *k == key).and_then(|(_, d)| *d) {
            Some(d) => Some((d, None)),
            None => {
                self.errors.push(FieldError {
                    kind: FieldErrorKind::MissingKey,
                    key: key.into(),
                    line: None,
                    message: "required key is missing".into(),
                });
                None
            }
        }
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.raw.entries.get(key).and_then(|(_, l)| *l)
    }

    fn fail(&mut self, kind: FieldErrorKind, key: &str, message: impl Into<String>) {
        let line = self.line_of(key);
        self.errors.push(FieldError { kind, key: key.into(), line, message: message.into() });
    }

    fn parse<T: FromStr>(&mut self, key: &'static str) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        let (v, _) = self.value(key)?;
        match v.parse::<T>() {
            Ok(x) => Some(x),
            Err(e) => {
                self.fail(FieldErrorKind::Invalid, key, format!("cannot parse `{v}`: {e}"));
                None
            }
        }
    }

    fn float(&mut self, key: &'static str, check: impl Fn(f64) -> bool, rule: &str) -> Option<f64> {
        let x: f64 = self.parse(key)?;
        if !x.is_finite() || !check(x) {
            self.fail(FieldErrorKind::Range, key, format!("{x} violates {rule}"));
            return None;
        }
        Some(x)
    }

    fn count(&mut self, key: &'static str, min: usize) -> Option<usize> {
        let x: usize = self.parse(key)?;
        if x < min {
            self.fail(FieldErrorKind::Range, key, format!("{x} is below the minimum {min}"));
            return None;
        }
        Some(x)
    }

    /// `None` inside for `auto`.
    fn auto<T: FromStr>(&mut self, key: &'static str) -> Option<Option<T>>
    where
        T::Err: fmt::Display,
    {
        let (v, _) = self.value(key)?;
        if v == "auto" {
            return Some(None);
        }
        self.parse(key).map(Some)
    }

    fn list<T: FromStr>(&mut self, key: &'static str) -> Option<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        let (v, _) = self.value(key)?;
        let mut out = Vec::new();
        for part in v.split(',') {
            match part.trim().parse::<T>() {
                Ok(x) => out.push(x),
                Err(e) => {
                    self.fail(FieldErrorKind::Invalid, key, format!("cannot parse list entry `{}`: {e}", part.trim()));
                    return None;
                }
            }
        }
        Some(out)
    }
}

fn fmt_list<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Vec<FieldError>> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self, Vec<FieldError>> {
        let mut r = Reader { raw, errors: Vec::new() };
        let positive = |x: f64| x > 0.0;
        let non_negative = |x: f64| x >= 0.0;

        let omega = r.float("model.omega", positive, "omega > 0");
        let g1 = r.float("model.g1", non_negative, "g1 >= 0");
        let g2 = r.float("model.g2", non_negative, "g2 >= 0");
        let delta = r.float("model.delta", |_| true, "a finite splitting");
        let atoms = r.count("model.atoms", 1);
        if let Some(m) = atoms {
            if m > cavity_core::spin::MAX_ATOMS {
                r.fail(FieldErrorKind::Range, "model.atoms", format!("{m} exceeds {}", cavity_core::spin::MAX_ATOMS));
            }
        }
        let freqs: Option<Option<Vec<f64>>> = match r.value("model.drive_freqs") {
            Some(("auto", _)) => Some(None),
            Some(_) => r.list("model.drive_freqs").map(Some),
            None => None,
        };
        let phases: Option<Option<Vec<f64>>> = match r.value("model.drive_phases") {
            Some(("auto", _)) => Some(None),
            Some(_) => r.list("model.drive_phases").map(Some),
            None => None,
        };
        let algebra: Option<Algebra> = r.parse("model.algebra");
        let strong_ratio = r.float("model.strong_ratio", positive, "strong_ratio > 0");

        let mut drive_freqs = None;
        let mut drive_phases = None;
        if let (Some(m), Some(omega)) = (atoms, omega) {
            match freqs {
                Some(Some(f)) if f.len() != m => {
                    r.fail(FieldErrorKind::Range, "model.drive_freqs", format!("{} frequencies for {m} atoms", f.len()))
                }
                Some(Some(f)) if f.iter().any(|w| !(w.is_finite() && *w > 0.0)) => {
                    r.fail(FieldErrorKind::Range, "model.drive_freqs", "every drive frequency must be positive")
                }
                Some(Some(f)) => drive_freqs = Some(f),
                Some(None) => drive_freqs = Some(vec![omega; m]),
                None => {}
            }
            match phases {
                Some(Some(p)) if p.len() != m => {
                    r.fail(FieldErrorKind::Range, "model.drive_phases", format!("{} phases for {m} atoms", p.len()))
                }
                Some(Some(p)) if p.iter().any(|v| !v.is_finite()) => {
                    r.fail(FieldErrorKind::Range, "model.drive_phases", "phases must be finite")
                }
                Some(Some(p)) => drive_phases = Some(p),
                Some(None) => drive_phases = Some(vec![0.0; m]),
                None => {}
            }
        }

        let dim = r.count("truncation.dim", 2);
        let buffer: Option<Option<usize>> = r.auto("truncation.buffer");
        if let (Some(d), Some(Some(b))) = (dim, buffer) {
            if b >= d {
                r.fail(FieldErrorKind::Range, "truncation.buffer", format!("buffer {b} must be below dim {d}"));
            }
        }

        let n = r.parse("resonance.n");
        let alphas: Option<Vec<i32>> = r.list("resonance.alpha");
        if alphas.as_ref().is_some_and(|a| a.contains(&0)) {
            r.fail(FieldErrorKind::Range, "resonance.alpha", "harmonic indices must be nonzero");
        }
        let target = r.parse("resonance.target");
        let omega2_min = r.float("resonance.omega2_min", positive, "omega2_min > 0");
        let omega2_max = r.float("resonance.omega2_max", positive, "omega2_max > 0");
        if let (Some(lo), Some(hi)) = (omega2_min, omega2_max) {
            if hi <= lo {
                r.fail(FieldErrorKind::Range, "resonance.omega2_max", format!("bracket [{lo}, {hi}] is empty"));
            }
        }
        let linear_points = r.count("resonance.linear_points", 2);
        let gamma_step = r.float("resonance.gamma_step", positive, "gamma_step > 0");
        let max_points = r.count("resonance.max_points", 2);

        let initial = r.parse("simulate.initial");
        let level = r.parse("simulate.level");
        let t_start = r.float("simulate.t_start", |_| true, "a finite time");
        let t_end = r.float("simulate.t_end", |_| true, "a finite time");
        if let (Some(a), Some(b)) = (t_start, t_end) {
            if b <= a {
                r.fail(FieldErrorKind::Range, "simulate.t_end", format!("t_end {b} must exceed t_start {a}"));
            }
        }
        let samples = r.count("simulate.samples", 2);
        let tol = r.float("simulate.tol", |x| (1e-12..=1e-6).contains(&x), "1e-12 <= tol <= 1e-6");
        let export_state = r.parse("simulate.export_state");

        let gate_alpha: Option<i32> = r.parse("gate.alpha");
        if gate_alpha == Some(0) {
            r.fail(FieldErrorKind::Range, "gate.alpha", "harmonic index must be nonzero");
        }
        let gate_target = r.parse("gate.target");
        let root = r.parse("gate.root");
        let gate_t_start = r.float("gate.t_start", |_| true, "a finite time");
        let gate_t_end: Option<Option<f64>> = r.auto("gate.t_end");
        if let (Some(a), Some(Some(b))) = (gate_t_start, gate_t_end) {
            if !(b.is_finite() && b > a) {
                r.fail(FieldErrorKind::Range, "gate.t_end", format!("t_end {b} must exceed t_start {a}"));
            }
        }
        let gate_samples = r.count("gate.samples", 1);
        let compare = r.parse("gate.compare");
        let periods: Option<u32> = r.parse("gate.periods");
        if periods == Some(0) {
            r.fail(FieldErrorKind::Range, "gate.periods", "need at least one period");
        }
        let samples_per_period = r.count("gate.samples_per_period", 4);
        let gate_tol = r.float("gate.tol", |x| (1e-12..=1e-6).contains(&x), "1e-12 <= tol <= 1e-6");
        let max_steps = r.count("gate.max_steps", 1);

        let parameter: Option<String> = r.parse("sweep.parameter");
        if let Some(p) = &parameter {
            if !sweepable(p) {
                r.fail(FieldErrorKind::Invalid, "sweep.parameter", format!("`{p}` cannot be swept"));
            }
        }
        let start = r.float("sweep.start", |_| true, "a finite value");
        let end = r.float("sweep.end", |_| true, "a finite value");
        if let (Some(a), Some(b)) = (start, end) {
            if a == b {
                r.fail(FieldErrorKind::Range, "sweep.end", "sweep range is degenerate");
            }
        }
        let steps = r.count("sweep.steps", 2);
        let format = r.parse("output.format");
        let path: Option<String> = r.parse("output.path");

        if !r.errors.is_empty() {
            return Err(r.errors);
        }
        // every value is present once no error was recorded
        let cfg = RunConfig {
            model: ModelSection {
                omega: omega.unwrap(),
                g1: g1.unwrap(),
                g2: g2.unwrap(),
                delta: delta.unwrap(),
                atoms: atoms.unwrap(),
                drive_freqs: drive_freqs.unwrap(),
                drive_phases: drive_phases.unwrap(),
                algebra: algebra.unwrap(),
                strong_ratio: strong_ratio.unwrap(),
            },
            truncation: TruncationSection { dim: dim.unwrap(), buffer: buffer.unwrap() },
            resonance: ResonanceSection {
                n: n.unwrap(),
                alphas: alphas.unwrap(),
                target: target.unwrap(),
                omega2_min: omega2_min.unwrap(),
                omega2_max: omega2_max.unwrap(),
                linear_points: linear_points.unwrap(),
                gamma_step: gamma_step.unwrap(),
                max_points: max_points.unwrap(),
            },
            simulate: SimulateSection {
                initial: initial.unwrap(),
                level: level.unwrap(),
                t_start: t_start.unwrap(),
                t_end: t_end.unwrap(),
                samples: samples.unwrap(),
                tol: tol.unwrap(),
                export_state: export_state.unwrap(),
            },
            gate: GateSection {
                alpha: gate_alpha.unwrap(),
                target: gate_target.unwrap(),
                root: root.unwrap(),
                t_start: gate_t_start.unwrap(),
                t_end: gate_t_end.unwrap(),
                samples: gate_samples.unwrap(),
                compare: compare.unwrap(),
                periods: periods.unwrap(),
                samples_per_period: samples_per_period.unwrap(),
                tol: gate_tol.unwrap(),
                max_steps: max_steps.unwrap(),
            },
            sweep: SweepSection { parameter: parameter.unwrap(), start: start.unwrap(), end: end.unwrap(), steps: steps.unwrap() },
            output: OutputSection { format: format.unwrap(), path: path.unwrap() },
        };
        if let Err(e) = cfg.truncation() {
            return Err(vec![FieldError {
                kind: FieldErrorKind::Range,
                key: "truncation.dim".into(),
                line: raw.entries.get("truncation.dim").and_then(|(_, l)| *l),
                message: e.to_string(),
            }]);
        }
        if let Err(e) = cfg.model_params() {
            return Err(vec![FieldError { kind: FieldErrorKind::Range, key: "model".into(), line: None, message: e.to_string() }]);
        }
        Ok(cfg)
    }

    pub fn model_params(&self) -> cavity_core::Result<ModelParams> {
        let m = &self.model;
        let mut p = ModelParams::new(m.omega, m.g1, m.g2, m.delta, m.drive_freqs.clone())?.with_phases(m.drive_phases.clone())?;
        p.algebra = m.algebra;
        p.strong_ratio = m.strong_ratio;
        p.validate()?;
        Ok(p)
    }

    pub fn truncation(&self) -> cavity_core::Result<FockTruncation> {
        let d = self.truncation.dim;
        FockTruncation::new(d, self.truncation.buffer.unwrap_or(d.div_ceil(4)))
    }

    pub fn search(&self, target: ResonanceTarget) -> ResonanceSearch {
        let r = &self.resonance;
        let mut s = ResonanceSearch::new(r.omega2_min, r.omega2_max).with_target(target);
        s.linear_points = r.linear_points;
        s.gamma_step = r.gamma_step;
        s.max_points = r.max_points;
        s
    }

    /// Canonical text listing every key; parsing it yields an equal config.
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let r = &self.resonance;
        let s = &self.simulate;
        let g = &self.gate;
        let w = &self.sweep;
        let auto = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        let pairs: Vec<(&str, String)> = vec![
            ("model.omega", m.omega.to_string()),
            ("model.g1", m.g1.to_string()),
            ("model.delta", m.delta.to_string()),
            ("model.atoms", m.atoms.to_string()),
            ("model.g2", m.g2.to_string()),
            ("model.drive_freqs", fmt_list(&m.drive_freqs)),
            ("model.drive_phases", fmt_list(&m.drive_phases)),
            ("model.algebra", m.algebra.to_string()),
            ("model.strong_ratio", m.strong_ratio.to_string()),
            ("truncation.dim", self.truncation.dim.to_string()),
            ("truncation.buffer", auto(self.truncation.buffer.map(|b| b.to_string()))),
            ("resonance.n", r.n.to_string()),
            ("resonance.alpha", fmt_list(&r.alphas)),
            ("resonance.target", r.target.to_string()),
            ("resonance.omega2_min", r.omega2_min.to_string()),
            ("resonance.omega2_max", r.omega2_max.to_string()),
            ("resonance.linear_points", r.linear_points.to_string()),
            ("resonance.gamma_step", r.gamma_step.to_string()),
            ("resonance.max_points", r.max_points.to_string()),
            ("simulate.initial", s.initial.to_string()),
            ("simulate.level", s.level.to_string()),
            ("simulate.t_start", s.t_start.to_string()),
            ("simulate.t_end", s.t_end.to_string()),
            ("simulate.samples", s.samples.to_string()),
            ("simulate.tol", s.tol.to_string()),
            ("simulate.export_state", s.export_state.to_string()),
            ("gate.alpha", g.alpha.to_string()),
            ("gate.target", g.target.to_string()),
            ("gate.root", g.root.to_string()),
            ("gate.t_start", g.t_start.to_string()),
            ("gate.t_end", auto(g.t_end.map(|t| t.to_string()))),
            ("gate.samples", g.samples.to_string()),
            ("gate.compare", g.compare.to_string()),
            ("gate.periods", g.periods.to_string()),
            ("gate.samples_per_period", g.samples_per_period.to_string()),
            ("gate.tol", g.tol.to_string()),
            ("gate.max_steps", g.max_steps.to_string()),
            ("sweep.parameter", w.parameter.clone()),
            ("sweep.start", w.start.to_string()),
            ("sweep.end", w.end.to_string()),
            ("sweep.steps", w.steps.to_string()),
            ("output.format", self.output.format.to_string()),
            ("output.path", self.output.path.clone()),
        ];
        let mut out = String::new();
        let mut section = "";
        for (k, v) in pairs {
            let head = k.split('.').next().unwrap_or("");
            if head != section {
                if !section.is_empty() {
                    out.push('\n');
                }
                section = head;
            }
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

/// Scalar model keys and indexed drive entries.
pub fn sweepable(key: &str) -> bool {
    if SWEEP_SCALARS.contains(&key) {
        return true;
    }
    ["model.drive_freqs.", "model.drive_phases."]
        .iter()
        .any(|p| key.strip_prefix(p).is_some_and(|i| i.parse::<usize>().is_ok()))
}

/// Raw config with `key` (a [`sweepable`] key) set to `value`.
pub fn with_parameter(raw: &RawConfig, cfg: &RunConfig, key: &str, value: f64) -> RawConfig {
    let mut out = raw.clone();
    let replace = |list: &[f64], idx: usize| {
        let mut v = list.to_vec();
        if idx < v.len() {
            v[idx] = value;
        }
        fmt_list(&v)
    };
    if let Some(i) = key.strip_prefix("model.drive_freqs.").and_then(|i| i.parse().ok()) {
        out.set("model.drive_freqs", replace(&cfg.model.drive_freqs, i));
    } else if let Some(i) = key.strip_prefix("model.drive_phases.").and_then(|i| i.parse().ok()) {
        out.set("model.drive_phases", replace(&cfg.model.drive_phases, i));
    } else {
        out.set(key, value.to_string());
    }
    out
}

/// The configuration shipped as `configs/default.conf`.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.conf");

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "model.omega = 1\nmodel.g1 = 0.2\nmodel.delta = 0.005\nmodel.atoms = 2\ntruncation.dim = 48\n";

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.model.drive_freqs, vec![1.0, 1.0]);
        assert_eq!(c.model.g2, 0.0);
        assert_eq!(c.truncation().unwrap().buffer(), 12);
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn default_file_parses() {
        let c = RunConfig::parse(DEFAULT_CONFIG).unwrap();
        assert_eq!(c.truncation().unwrap().dim(), 48);
        assert!(c.truncation().unwrap().soundness(c.model_params().unwrap().theta_max()).is_sound());
    }

    #[test]
    fn errors_carry_key_and_line() {
        let text = "model.omega = 1\nmodel.g1 = 0.2\nmodel.bogus = 3\nmodel.delta = 0.005\nmodel.atoms = 2\ntruncation.dim = 48\n";
        let e = RunConfig::parse(text).unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].kind, e[0].key.as_str(), e[0].line), (FieldErrorKind::UnknownKey, "model.bogus", Some(3)));

        let e = RunConfig::parse("model.omega = 1\nmodel.delta = 0\nmodel.atoms = 2\ntruncation.dim = 48\n").unwrap_err();
        assert_eq!((e[0].kind, e[0].key.as_str(), e[0].line), (FieldErrorKind::MissingKey, "model.g1", None));

        let e = RunConfig::parse(&format!("{MINIMAL}model.drive_freqs = -1, 0.5\n")).unwrap_err();
        assert_eq!((e[0].kind, e[0].key.as_str(), e[0].line), (FieldErrorKind::Range, "model.drive_freqs", Some(6)));

        let e = RunConfig::parse(&MINIMAL.replace("48", "1")).unwrap_err();
        assert_eq!((e[0].kind, e[0].key.as_str()), (FieldErrorKind::Range, "truncation.dim"));

        let e = RunConfig::parse(&format!("{MINIMAL}model.g1 = 0.3\nnonsense\n")).unwrap_err();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].kind, FieldErrorKind::DuplicateKey);
        assert_eq!((e[1].kind, e[1].line), (FieldErrorKind::Syntax, Some(7)));
    }

    #[test]
    fn overrides_win_over_file() {
        let mut raw = RawConfig::parse(MINIMAL).unwrap();
        raw.apply_overrides(&["model.g1=0.25", "truncation.buffer = 20"]).unwrap();
        let c = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(c.model.g1, 0.25);
        assert_eq!(c.truncation.buffer, Some(20));
        assert!(raw.apply_overrides(&["model.nope=1"]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::parse(DEFAULT_CONFIG).unwrap();
        c.model.drive_phases = vec![0.1, -0.30000000000000004];
        c.gate.t_end = Some(12.5);
        c.simulate.initial = InitialState::Dressed(vec![1, -1]);
        let again = RunConfig::parse(&c.to_text()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_text(), c.to_text());
    }

    #[test]
    fn sweep_parameters() {
        assert!(sweepable("model.g2") && sweepable("model.drive_freqs.1"));
        assert!(!sweepable("truncation.dim") && !sweepable("model.drive_freqs.x"));
        let raw = RawConfig::parse(DEFAULT_CONFIG).unwrap();
        let c = RunConfig::from_raw(&raw).unwrap();
        let swept = RunConfig::from_raw(&with_parameter(&raw, &c, "model.drive_freqs.1", 0.25)).unwrap();
        assert_eq!(swept.model.drive_freqs, vec![c.model.drive_freqs[0], 0.25]);
    }
}
