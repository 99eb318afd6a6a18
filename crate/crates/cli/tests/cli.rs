use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use wentzell_cli::convert::{parse_document, scenario};
use wentzell_core::solver::SolverConfig;

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn wentzell(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wentzell")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn invoke(scenario: &Path, out: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec!["--scenario", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    wentzell(&args)
}

fn summary(dir: &Path) -> toml::Table {
    toml::from_str(&fs::read_to_string(dir.join("summary.toml")).unwrap()).unwrap()
}

fn column(csv: &Path, name: &str) -> Vec<f64> {
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| h.split(' ').next() == Some(name)).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

fn write_doc(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("scenario.toml");
    fs::write(&p, text).unwrap();
    p
}

fn dir_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn minimal_document_gets_default_solver() {
    let doc = parse_document(&fs::read_to_string(scenario_path("heat.toml")).unwrap()).unwrap();
    let sc = scenario(&doc).unwrap();
    assert_eq!(sc.solver, SolverConfig::default());
    assert_eq!(sc.epsilon(), 0.0);
    assert_eq!(sc.solver.cadence(1.0), 1.0 / 64.0);
}

const POWER_GROWTH: &str = r#"
schema = 1
horizon = 1.0
[domain]
extents = [1.0]
cells = [10]
left = "gamma1"
right = "gamma1"
[[field]]
diffusion = { law = "power", alpha = 1.0, p = 2.0 }
f = "u^3"
gamma1 = { kind = "dynamic", delta = 1.0 }
initial = "1"
[declarations]
theta = [3.0]
"#;

#[test]
fn declared_growth_sets_degiorgi_exponent() {
    let sc = scenario(&parse_document(POWER_GROWTH).unwrap()).unwrap();
    assert_eq!(sc.degiorgi_exponents().0, 4.0);
    assert_eq!(sc.epsilon(), 1e-6);
}

#[test]
fn zero_dynamic_weight_is_rejected() {
    let text = POWER_GROWTH.replace("delta = 1.0", "delta = 0.0");
    let err = scenario(&parse_document(&text).unwrap()).unwrap_err();
    assert!(format!("{err:#}").contains("delta must be > 0"), "{err:#}");
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = invoke(&write_doc(tmp.path(), &text), &tmp.path().join("out"), &[]);
    assert_eq!(code, 3);
}

#[test]
fn unknown_keys_are_rejected_with_line() {
    let text = POWER_GROWTH.replace("cells = [10]", "cells = [10]\nsmoothing = true");
    let err = format!("{:#}", parse_document(&text).unwrap_err());
    assert!(err.contains("line 7") && err.contains("smoothing"), "{err}");
    let version = POWER_GROWTH.replace("schema = 1", "schema = 7");
    assert!(parse_document(&version).is_err());
}

#[test]
fn conservation_run_keeps_mass() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let (code, err) = invoke(&scenario_path("conservation.toml"), &out, &["--no-metadata"]);
    assert_eq!(code, 0, "{err}");
    let mass = column(&out.join("monitors.csv"), "mass_total");
    let drift = mass.iter().fold(0.0f64, |m, v| m.max((v - mass[0]).abs() / mass[0]));
    assert!(drift <= 1e-10, "drift {drift}");
    assert!(out.join("snapshots.csv").exists());
    assert_eq!(summary(&out)["status"]["status"].as_str(), Some("completed"));
}

#[test]
fn quadratic_ode_blows_up_at_half() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let (code, _) = invoke(&scenario_path("blowup.toml"), &out, &["--no-metadata"]);
    assert_eq!(code, 2);
    let s = summary(&out);
    let t = s["status"]["blowup_time"].as_float().unwrap();
    assert!((0.45..=0.55).contains(&t), "t* = {t}");
    assert_eq!(s["outcome"].as_str(), Some("blow_up"));
}

#[test]
fn nu_sweep_writes_one_spectrum_per_member() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let (code, err) = invoke(&scenario_path("stability.toml"), &out, &["--command", "sweep", "--sweep", "nu=1,0.5,0.25", "--no-metadata"]);
    assert_eq!(code, 0, "{err}");
    let s = summary(&out);
    let members = s["member"].as_array().unwrap();
    let keys: Vec<&str> = members.iter().map(|m| m["key"].as_str().unwrap()).collect();
    assert_eq!(keys, ["nu=0.25", "nu=0.5", "nu=1"]);
    let counts: Vec<i64> = members.iter().map(|m| m["summary"]["instability_index"].as_integer().unwrap()).collect();
    // members are ordered by increasing nu, so counts must not increase
    assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    for k in keys {
        let lambdas = column(&out.join(k).join("spectrum.csv"), "lambda");
        assert_eq!(lambdas.len(), 8);
        assert!(lambdas.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, extra) in [("conservation.toml", vec![]), ("stability.toml", vec!["--command", "sweep", "--sweep", "nu=0.5,1"])] {
        let a = tmp.path().join(format!("{name}-a"));
        let b = tmp.path().join(format!("{name}-b"));
        let mut args = extra.clone();
        args.push("--no-metadata");
        assert_eq!(invoke(&scenario_path(name), &a, &args).0, 0);
        assert_eq!(invoke(&scenario_path(name), &b, &args).0, 0);
        assert_eq!(dir_bytes(&a), dir_bytes(&b), "{name}");
    }
}

#[test]
fn metadata_line_is_optional() {
    let tmp = tempfile::tempdir().unwrap();
    let (with, without) = (tmp.path().join("with"), tmp.path().join("without"));
    assert_eq!(invoke(&scenario_path("waves.toml"), &with, &["--command", "waves"]).0, 0);
    assert_eq!(invoke(&scenario_path("waves.toml"), &without, &["--command", "waves", "--no-metadata"]).0, 0);
    let a = fs::read_to_string(with.join("summary.toml")).unwrap();
    let b = fs::read_to_string(without.join("summary.toml")).unwrap();
    assert!(a.starts_with("# wentzell") && !b.starts_with('#'));
    assert_eq!(a.lines().skip(1).collect::<Vec<_>>(), b.lines().collect::<Vec<_>>());
}

#[test]
fn waves_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ok");
    assert_eq!(invoke(&scenario_path("waves.toml"), &out, &["--command", "waves"]).0, 0);
    let orders = summary(&out)["orders"].as_array().unwrap().iter().map(|v| v.as_float().unwrap()).collect::<Vec<_>>();
    assert!(orders.iter().all(|&o| o >= 1.8), "{orders:?}");
    let strict = fs::read_to_string(scenario_path("waves.toml")).unwrap() + "min_order = 2.5\n";
    let (code, _) = invoke(&write_doc(tmp.path(), &strict), &tmp.path().join("strict"), &["--command", "waves"]);
    assert_eq!(code, 4);
    let traveling = "schema = 1\n[waves]\nspeed = { kind = \"power\", coef = 1.0, p = 2.0 }\nprofile = { kind = \"traveling\", eta = \"0.7\" }\n";
    let out = tmp.path().join("traveling");
    assert_eq!(invoke(&write_doc(tmp.path(), traveling), &out, &["--command", "waves"]).0, 0);
    assert_eq!(summary(&out)["claw_residual"].as_float(), Some(0.0));
}

fn small_smoothing(expect: &str) -> String {
    fs::read_to_string(scenario_path("smoothing.toml"))
        .unwrap()
        .replace("cells = [100]", "cells = [30]")
        .replace("expect = \"dissipative\"", &format!("expect = \"{expect}\""))
}

#[test]
fn diagnose_property_p_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("holds");
    let (code, err) = invoke(&write_doc(tmp.path(), &small_smoothing("dissipative")), &out, &["--command", "diagnose", "--no-metadata"]);
    assert_eq!(code, 0, "{err}");
    let s = summary(&out);
    assert_eq!(s["property_p"]["verdict"].as_str(), Some("dissipative"));
    assert_eq!(s["degiorgi"]["certified"].as_bool(), Some(true));
    assert!(out.join("ensemble.csv").exists() && out.join("moser.csv").exists() && out.join("degiorgi.csv").exists());
    let (code, _) = invoke(&write_doc(tmp.path(), &small_smoothing("data_dependent")), &tmp.path().join("fails"), &["--command", "diagnose"]);
    assert_eq!(code, 4);
}

#[test]
fn seed_controls_trace_probe() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = write_doc(tmp.path(), &small_smoothing("dissipative").replace("scales = [1.0, 10.0, 100.0]", "scales = []"));
    let c = |seed: &str, dir: &str| {
        let out = tmp.path().join(dir);
        assert_eq!(invoke(&doc, &out, &["--command", "diagnose", "--seed", seed]).0, 0);
        summary(&out)["trace_probe"]["least_c"].as_float().unwrap()
    };
    assert_eq!(c("3", "a"), c("3", "b"));
}

#[test]
fn invalid_invocations_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(invoke(&scenario_path("heat.toml"), &out, &["--command", "simulate"]).0, 3);
    assert_eq!(invoke(&tmp.path().join("missing.toml"), &out, &[]).0, 3);
    assert_eq!(wentzell(&["--unknown-flag"]).0, 3);
    assert_eq!(invoke(&scenario_path("heat.toml"), &out, &["--sweep", "nu"]).0, 3);
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    assert_eq!(invoke(&scenario_path("heat.toml"), &blocker.join("out"), &[]).0, 3);
    assert_eq!(invoke(&scenario_path("waves.toml"), &out, &["--command", "run"]).0, 3);
}

#[test]
fn snapshot_cadence_flag_overrides_document() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(invoke(&scenario_path("heat.toml"), &out, &["--snapshot-cadence", "0.25"]).0, 0);
    let s = summary(&out);
    assert_eq!(s["snapshots"].as_integer(), Some(5));
    assert_eq!(s["scenario"]["snapshot_cadence"].as_float(), Some(0.25));
}

#[test]
fn sweep_member_blow_up_does_not_abort() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let (code, _) = invoke(&scenario_path("blowup.toml"), &out, &["--sweep", "scale=0.5,1", "--no-metadata"]);
    assert_eq!(code, 2);
    let s = summary(&out);
    let outcomes: Vec<&str> = s["member"].as_array().unwrap().iter().map(|m| m["outcome"].as_str().unwrap()).collect();
    assert_eq!(outcomes, ["success", "blow_up"]);
}
