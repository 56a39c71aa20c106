use std::path::Path;
use std::process::{Command, Output};

use learncurve_core::io::{builtin_presets, scenario_to_json, STACKS_BENCHMARK};

fn learncurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_learncurve"))
        .args(args)
        .env_remove(learncurve_cli::PRESET_DIR_VAR)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn target_table() {
    let o = learncurve(&[
        "target",
        "--preset",
        "paper-stacks-benchmark",
        "--variant",
        "western_pem",
        "--structure",
        "technology_fragmented",
        "--target-cost",
        "300",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("8.6116") && out.contains("2.9252e9"), "{out}");
}

#[test]
fn project_shared_after_100_gw() {
    let o = learncurve(&[
        "project",
        "--preset",
        "paper-stacks-benchmark",
        "--structure",
        "shared",
        "--at-total",
        "100",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains(",western_pem,")).unwrap();
    let cost: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
    assert!((cost - 353.6).abs() < 0.5, "{cost}");
}

#[test]
fn out_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 5] = [
        &["figure", "--id", "fig2", "--preset", "paper-stacks-benchmark"],
        &["project", "--preset", "paper-bop-epc-2030", "--format", "json"],
        &["target", "--preset", "paper-bop-epc-2030", "--region", "us", "--structure", "local", "--target-cost", "1000"],
        &["lcoh", "--preset", "paper-stacks-benchmark", "--point", "100gw"],
        &["sweep", "--preset", "paper-bop-epc-2030", "--region", "eu", "--category", "bop", "--points", "9"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for round in 0..2 {
            let path = dir.path().join(format!("{i}-{round}.out"));
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--out", path.to_str().unwrap()]);
            let o = learncurve(&full);
            assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
            assert!(o.stdout.is_empty());
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
    let csv = std::fs::read_to_string(dir.path().join("0-0.out")).unwrap();
    assert!(csv.starts_with("structure,lr_case,learning_rate,"));
    assert!(csv.ends_with("\r\n"));
}

#[test]
fn help_for_every_subcommand() {
    for sub in ["project", "target", "lcoh", "sweep", "figure", "presets", "serve"] {
        let o = learncurve(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("Usage: learncurve"), "{sub}");
    }
    assert_eq!(learncurve(&["--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 8] = [
        &[],
        &["bogus"],
        &["figure", "--preset", "paper-stacks-benchmark"],
        &["figure", "--id", "fig2"],
        &["figure", "--id", "fig2", "--preset", "a", "--scenario", "b.json"],
        &["project", "--preset", "paper-stacks-benchmark", "--structure", "sharde"],
        &["project", "--preset", "paper-stacks-benchmark", "--at-total", "5", "--point", "60gw"],
        &["target", "--preset", "paper-stacks-benchmark", "--variant", "western_pem"],
    ];
    for args in cases {
        let o = learncurve(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn validation_errors_exit_1_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: serde_json::Value =
        serde_json::from_str(&scenario_to_json(builtin_presets().get(STACKS_BENCHMARK).unwrap())).unwrap();
    doc["stacks"]["curves"]["western_pem"]["learning_rate"] = 1.2.into();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = learncurve(&["project", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("stacks.curves.western_pem.learning_rate = 1.2"), "{err}");
    assert!(!err.contains("panicked"));

    let o = learncurve(&["project", "--preset", "paper-bop-epc-2030", "--region", "china", "--structure", "shared"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("structure = shared"));

    let o = learncurve(&["target", "--preset", "paper-stacks-benchmark", "--variant", "western_pem", "--target-cost", "900"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("target_cost_usd_per_kw = 900"));
}

#[test]
fn lax_mode_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: serde_json::Value =
        serde_json::from_str(&scenario_to_json(builtin_presets().get(STACKS_BENCHMARK).unwrap())).unwrap();
    doc["finance"]["notes"] = "x".into();
    let path = dir.path().join("extra.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let strict = learncurve(&["project", "--scenario", p]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stderr(&strict).contains("finance.notes"));
    let lax = learncurve(&["project", "--scenario", p, "--lax"]);
    assert_eq!(lax.status.code(), Some(0));
    assert!(stderr(&lax).contains("warning: ignored unknown key: finance.notes"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"metadata\": [\n").unwrap();
    let o = learncurve(&["project", "--scenario", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line "), "{}", stderr(&o));
}

#[test]
fn at_file_selects_an_explicit_split() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("at.json");
    let state = r#"{"per_variant_gw": {"western_alk": 0, "chinese_alk": 0, "western_pem": 50, "chinese_pem": 0},
                    "per_region_gw": {"us": 0, "eu": 50, "china": 0, "row": 0}}"#;
    std::fs::write(&path, state).unwrap();
    let o = learncurve(&[
        "project",
        "--preset",
        "paper-stacks-benchmark",
        "--variant",
        "western_pem",
        "--structure",
        "regionally_fragmented",
        "--at-file",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("custom,western_pem,regionally_fragmented,0.5,50.5,"), "{out}");
}

fn write_preset(dir: &Path, name: &str) {
    let mut s = builtin_presets().get(STACKS_BENCHMARK).unwrap().clone();
    s.metadata.name = name.to_string();
    s.metadata.description = "extra preset".to_string();
    std::fs::write(dir.join(format!("{name}.json")), scenario_to_json(&s)).unwrap();
}

#[test]
fn preset_directories_from_environment() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_preset(a.path(), "custom-a");
    write_preset(b.path(), "custom-b");
    let dirs = std::env::join_paths([a.path(), b.path()]).unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_learncurve"))
            .args(args)
            .env(learncurve_cli::PRESET_DIR_VAR, &dirs)
            .output()
            .unwrap()
    };
    let o = run(&["presets"]);
    let listing = stdout(&o);
    assert!(listing.contains("custom-a") && listing.contains("custom-b") && listing.contains("paper-bop-epc-2030"));
    let o = run(&["figure", "--preset", "custom-b", "--id", "fig1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["presets", "--show", "custom-a"]);
    assert!(stdout(&o).contains("\"name\": \"custom-a\""));
}

#[test]
fn serve_reports_bind_failures() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = listener.local_addr().unwrap().port().to_string();
    let o = learncurve(&["serve", "--port", &port]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot serve"), "{}", stderr(&o));
}

#[test]
fn in_process_runner_matches_binary() {
    let args = ["learncurve", "figure", "--preset", "paper-bop-epc-2030", "--id", "fig5", "--format", "csv"];
    let mut out = Vec::new();
    let mut err = Vec::new();
    assert_eq!(learncurve_cli::run_with(args, &mut out, &mut err), 0);
    assert_eq!(out, learncurve(&args[1..]).stdout);
}

#[test]
fn sweep_band_is_comma_separated() {
    let base = ["sweep", "--preset", "paper-stacks-benchmark", "--variant", "western_pem", "--axis", "84", "--format", "csv"];
    let mut args = base.to_vec();
    args.extend(["--band", "0.1,0.2,0.3"]);
    let o = learncurve(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("shared,axis,84,495.96"), "{}", stdout(&o));

    for bad in ["0.1,0.2", "0.3,0.2,0.1", "a,b,c"] {
        let mut args = base.to_vec();
        args.extend(["--band", bad]);
        assert_eq!(learncurve(&args).status.code(), Some(2), "{bad}");
    }
}
