use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use ybalg_cli::config::Overrides;
use ybalg_cli::Check;
use ybalg_cli::{parse_record, run, ConfigFile, RunConfig};

fn ybalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybalg"))
        .args(args)
        .output()
        .expect("spawn ybalg")
}

fn records(out: &Output) -> Vec<ybalg_cli::ReportRecord> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| parse_record(l).expect("record parses"))
        .collect()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("compute prints one JSON object")
}

fn cpx(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn dybe_run_passes() {
    let out = ybalg(&[
        "run",
        "--checks",
        "dybe",
        "--samples",
        "100",
        "--seed",
        "42",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let recs = records(&out);
    assert_eq!(recs.len(), 100);
    assert!(recs
        .iter()
        .all(|r| r.pass && r.check == "dybe" && r.seed == 42));
    assert!(recs.iter().enumerate().all(|(i, r)| r.sample_index == i));
}

#[test]
fn z_contour_records_carry_both_values() {
    let out = ybalg(&[
        "run",
        "--checks",
        "z-contour-vs-bf",
        "--L",
        "3",
        "--samples",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for r in records(&out) {
        assert_eq!(r.params.l, 3);
        let rel = r.values["rel_diff"].as_f64().unwrap();
        assert!(r.values.contains_key("bruteforce") && r.values.contains_key("contour"));
        assert_eq!(r.residual, Some(rel));
        assert!(rel <= 1e-8);
    }
}

#[test]
fn every_check_emits_parseable_records() {
    let out = ybalg(&["run", "--samples", "2", "--L", "2", "--threads", "2"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let recs = records(&out);
    assert_eq!(recs.len(), 2 * Check::ALL.len());
    let names: Vec<&str> = recs.iter().step_by(2).map(|r| r.check.as_str()).collect();
    assert_eq!(names, Check::ALL.map(Check::name));
}

#[test]
fn mu_length_mismatch_is_a_config_error() {
    let dir = std::env::temp_dir().join(format!("ybalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "[model]\nL = 3\nmu = [[0.1, 0.0], [0.2, 0.0]]").unwrap();
    drop(f);
    let out = ybalg(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--checks",
        "dybe",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("model.mu"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_check_and_bad_pair_are_config_errors() {
    assert_eq!(
        ybalg(&["run", "--checks", "dybe,nope"]).status.code(),
        Some(2)
    );
    assert_eq!(ybalg(&["run", "--gamma", "0.4"]).status.code(), Some(2));
    assert_eq!(
        ybalg(&["compute", "z", "--theta", "x,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn zero_tolerance_fails_with_exit_one() {
    let dir = std::env::temp_dir().join(format!("ybalg-cli-tol-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tol.toml");
    std::fs::write(
        &path,
        "[model.tolerances]\nrll = 0.0\n[run]\nchecks = [\"rll\"]\nsamples = 3\n",
    )
    .unwrap();
    let out = ybalg(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&out);
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| !r.pass && r.tolerance == 0.0));
}

#[test]
fn single_thread_output_is_reproducible() {
    let args = [
        "run",
        "--checks",
        "fx,snad",
        "--samples",
        "3",
        "--seed",
        "7",
        "--threads",
        "1",
    ];
    let strip = |o: &Output| -> Vec<Value> {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .map(|l| {
                let mut v: Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("wall_time_ms");
                v
            })
            .collect()
    };
    assert_eq!(strip(&ybalg(&args)), strip(&ybalg(&args)));
}

#[test]
fn parallel_and_serial_runs_agree() {
    let ov = |threads| Overrides {
        checks: Some("identities,z-contour-vs-bf".into()),
        samples: Some(6),
        threads: Some(threads),
        ..Overrides::default()
    };
    let go = |threads| {
        let cfg = RunConfig::resolve(ConfigFile::default(), &ov(threads)).unwrap();
        let mut buf = Vec::new();
        let summary = run(&cfg, &mut buf).unwrap();
        assert!(summary.all_passed());
        String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| {
                let r = parse_record(l).unwrap();
                (
                    r.check,
                    r.sample_index,
                    r.residual.map(f64::to_bits),
                    r.params,
                )
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(go(1), go(4));
}

#[test]
fn compute_sn_with_no_operators_is_one() {
    let out = ybalg(&["compute", "sn", "--n", "0", "--L", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(cpx(&v["bruteforce"]), (1.0, 0.0));
    assert_eq!(cpx(&v["contour"]), (1.0, 0.0));
}

#[test]
fn compute_z_methods_agree() {
    let out = ybalg(&[
        "compute", "z", "--L", "3", "--method", "both", "--seed", "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["rel_diff"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["inputs"]["lambda"].as_array().unwrap().len(), 3);
}

#[test]
fn compute_z_single_site_matches_closed_form() {
    for regime in [&["--trig"][..], &["--nome", "0.15,0.05"][..]] {
        let mut args = vec![
            "compute",
            "z",
            "--lambda",
            "0.3,-0.1",
            "--theta",
            "0.7,0.2",
            "--mu",
            "-0.05,0.02",
        ];
        args.extend_from_slice(regime);
        let v = json(&ybalg(&args));
        let (br, bi) = cpx(&v["bruteforce"]);
        let (cr, ci) = cpx(&v["closed_form"]);
        assert!(
            ((br - cr).powi(2) + (bi - ci).powi(2)).sqrt() <= 1e-12 * (cr * cr + ci * ci).sqrt()
        );
    }
}

#[test]
fn compute_rejects_mismatched_lengths() {
    let out = ybalg(&["compute", "z", "--L", "3", "--lambda", "0.1,0;0.2,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
    assert_eq!(
        ybalg(&["compute", "sn", "--L", "2", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_file_receives_records() {
    let path = std::env::temp_dir().join(format!("ybalg-out-{}.jsonl", std::process::id()));
    let out = ybalg(&[
        "run",
        "--checks",
        "hw-actions",
        "--samples",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter_map(|l| parse_record(l).ok()).count(), 2);
}
