use cavity_cli::app;
use cavity_cli::config::{InitialState, RawConfig, RunConfig, DEFAULT_CONFIG};
use proptest::prelude::*;
use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, Vec<u8>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["cavity"];
    full.extend_from_slice(args);
    let code = app::run(full, &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn json_outputs_match_schemas() {
    let cases: [(&str, &[&str]); 5] = [
        ("verify", &["verify", "--format", "json"]),
        ("resonance", &["resonance", "--format", "json"]),
        ("gate", &["gate", "--format", "json"]),
        ("simulate", &["simulate", "--format", "json", "--set", "simulate.t_end=2", "--set", "simulate.samples=3"]),
        ("sweep", &["sweep", "--format", "json", "--set", "sweep.steps=3"]),
    ];
    for (name, args) in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{name}: {err}");
        let doc: Value = serde_json::from_slice(&out).unwrap();
        assert_valid(name, &doc);
    }
}

#[test]
fn gate_comparison_embeds_report() {
    let (code, out, err) = run(&[
        "gate",
        "--format",
        "json",
        "--set",
        "gate.compare=true",
        "--set",
        "truncation.dim=24",
        "--set",
        "truncation.buffer=10",
        "--set",
        "gate.samples_per_period=16",
        "--set",
        "gate.tol=1e-7",
    ]);
    assert_eq!(code, 0, "{err}");
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert_valid("gate", &doc);
    assert!(doc["comparison"]["norm_drift"].as_f64().unwrap() < 1e-6);
}

#[test]
fn error_records_match_schema() {
    let (code, out, err) = run(&["resonance", "--set", "resonance.omega2_min=1.5", "--set", "resonance.omega2_max=2"]);
    assert_eq!(code, 3);
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 1, "header only");
    for line in err.lines() {
        assert_valid("error", &serde_json::from_str(line).unwrap());
    }
}

#[test]
fn field_errors_are_reported_one_per_line() {
    let dir = std::env::temp_dir().join(format!("cavity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.conf");
    std::fs::write(&path, "model.omega = 0\nmodel.g1 = x\nmodel.delta = 0.005\nmodel.atoms = 2\nmodel.atoms = 3\n").unwrap();
    let (code, _, err) = run(&["-c", path.to_str().unwrap(), "verify"]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code, 1);
    let recs: Vec<Value> = err.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary: Vec<(String, String, Option<u64>)> = recs
        .iter()
        .map(|r| (r["kind"].as_str().unwrap().to_string(), r["key"].as_str().unwrap().to_string(), r["line"].as_u64()))
        .collect();
    assert_eq!(summary, vec![("duplicate_key".into(), "model.atoms".into(), Some(5))]);

    let (code, _, err) = run(&["verify", "--set", "model.omega=0", "--set", "model.g1=abc", "--set", "truncation.dim=1"]);
    assert_eq!(code, 1);
    let keys: Vec<String> = err.lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["key"].as_str().unwrap().to_string()).collect();
    assert_eq!(keys, vec!["model.omega", "model.g1", "truncation.dim"]);
}

#[test]
fn help_and_config_commands() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("verify"));
    let (code, out, _) = run(&["config", "--set", "model.g2=0.07"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    let cfg = RunConfig::parse(&text).unwrap();
    assert_eq!(cfg.model.g2, 0.07);
    assert_eq!(cfg, RunConfig::from_raw(&{
        let mut raw = RawConfig::parse(DEFAULT_CONFIG).unwrap();
        raw.apply_overrides(&["model.g2=0.07"]).unwrap();
        raw
    })
    .unwrap());
}

#[test]
fn output_path_writes_file() {
    let dir = std::env::temp_dir().join(format!("cavity-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("roots.csv");
    let (code, out, _) = run(&["resonance", "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(text.starts_with("n,alpha,target,omega2,residual,"));
}

#[test]
fn sweep_output_independent_of_worker_count() {
    let run_with = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_cavity"))
            .args(["sweep", "--set", "sweep.steps=10"])
            .env("CAVITY_WORKERS", workers)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let one = run_with("1");
    assert_eq!(one, run_with("4"));
    // parameter line, header and ten rows
    assert_eq!(String::from_utf8(one).unwrap().lines().count(), 12);

    let bad = Command::new(env!("CARGO_BIN_EXE_cavity")).arg("sweep").env("CAVITY_WORKERS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn dressed_initial_state_for_three_atoms() {
    let (code, out, err) = run(&[
        "simulate",
        "--set",
        "model.atoms=3",
        "--set",
        "model.drive_freqs=1, 0.5, 0.7",
        "--set",
        "model.drive_phases=0, 0, 0",
        "--set",
        "truncation.dim=20",
        "--set",
        "truncation.buffer=auto",
        "--set",
        "simulate.initial=dressed:+1,-1,+1",
        "--set",
        "simulate.t_end=3",
        "--set",
        "simulate.samples=4",
    ]);
    assert_eq!(code, 0, "{err}");
    let text = String::from_utf8(out).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 4 + 8);
    assert!(!header.contains("phi"));
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    (
        0.1f64..5.0,
        0.0f64..0.5,
        -0.1f64..0.1,
        proptest::collection::vec(0.05f64..3.0, 2),
        proptest::collection::vec(-3.0f64..3.0, 2),
        8usize..64,
        prop::option::of(1usize..4),
        prop::collection::vec(prop_oneof![-4i32..0, 1i32..5], 1..4),
        prop_oneof![Just(InitialState::Cat(2)), Just(InitialState::Dressed(vec![-1, 1]))],
        prop::option::of(1.0f64..100.0),
    )
        .prop_map(|(omega, g1, delta, freqs, phases, dim, buffer, alphas, initial, t_end)| {
            let mut c = RunConfig::parse(DEFAULT_CONFIG).unwrap();
            c.model.omega = omega;
            c.model.g1 = g1;
            c.model.delta = delta;
            c.model.drive_freqs = freqs;
            c.model.drive_phases = phases;
            c.truncation.dim = dim;
            c.truncation.buffer = buffer;
            c.resonance.alphas = alphas;
            c.simulate.initial = initial;
            c.gate.t_end = t_end;
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_text_round_trips(cfg in arb_config()) {
        let text = cfg.to_text();
        let back = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_text(), text);
    }
}
