use std::fs;
use std::path::Path;
use std::process::Command;

use p2mu_cli::{plot_tables, run_experiment, BpeMap, Experiment, ExperimentConfig, Payload, Report};
use p2mu_core::{parse_measure, C64};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_p2mu"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const ARCLENGTH: &str = r#"{"components":[{"type":"circle_fourier","coeffs":{"0":[1,0]}}]}"#;

#[test]
fn measure_spec_examples() {
    let m = parse_measure(ARCLENGTH, "m").unwrap();
    assert_eq!(m.moment(3, 3).unwrap(), C64::new(1.0, 0.0));
    let a5 = parse_measure(r#"{"components":[{"type":"bergman","alpha":5}]}"#, "a5").unwrap();
    assert!((a5.moment(0, 0).unwrap().re - 1.0).abs() < 1e-15);
    let zero = parse_measure(r#"{"components":[]}"#, "zero").unwrap();
    assert!(zero.is_zero());
}

#[test]
fn plemelj_scan_on_arclength() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", ARCLENGTH);
    let cfg = ExperimentConfig::new(Experiment::PlemeljScan {
        measure_path: m,
        zeta: 0.0,
        r: 0.5,
        deltas: vec![1e-2, 1e-3, 1e-4],
        tol: 1e-6,
    });
    let rep = run_experiment(&cfg).unwrap();
    assert!(rep.pass);
    let Payload::PlemeljScan(scan) = &rep.result else { panic!("wrong payload") };
    let last = scan.final_record().unwrap();
    assert!(last.inner_fit.norm() < 1e-9);
    assert!((last.outer_fit + 1.0).norm() < 1e-9);
    let csv = &plot_tables(&rep)[0].text;
    assert_eq!(
        csv.lines().nth(1).unwrap(),
        "delta,inner_fit_re,inner_fit_im,outer_fit_re,outer_fit_im,agree_fraction"
    );
    assert_eq!(csv.lines().count(), 2 + 3);
}

#[test]
fn hz_verify_defaults_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = || {
        bin()
            .args(["hz", "verify", "--a", "0.9", "--alpha", "5", "--c", "0.3", "--n", "20", "--out"])
            .arg(&out)
            .status()
            .unwrap()
    };
    assert!(run().success());
    let first = fs::read(&out).unwrap();
    assert!(run().success());
    assert_eq!(first, fs::read(&out).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["command"], "hz-verify");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for fam in ["orthogonality_i", "orthogonality_ii", "orthogonality_iii", "d1_monotone", "wandering_dim_n30"] {
        assert!(names.contains(&fam), "missing {fam}");
    }
}

#[test]
fn bpe_map_writes_csv_with_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", ARCLENGTH);
    let out = dir.path().join("map.csv");
    let status = bin()
        .args(["p2", "bpe-map", "--measure"])
        .arg(&m)
        .args(["--grid", "-1.2,1.2,5,-1.2,1.2,5", "--nmax", "40", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap(), "re,im,k_10,k_20,k_40");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 5);
    // 17 significant digits: one leading digit and sixteen decimals.
    assert_eq!(row[0], "-1.2000000000000000e0");
    assert!(dir.path().join("map.json").exists());
}

#[test]
fn empty_section_gives_header_only() {
    let rep = Report {
        config: ExperimentConfig::new(Experiment::CoveringTest {
            instances: 0,
            disks: 0,
            samples_per_disk: 0,
        }),
        checks: vec![],
        pass: true,
        result: Payload::BpeMap(BpeMap {
            ns: vec![10, 20, 40],
            rows: vec![],
        }),
        wall_time_s: None,
    };
    let t = &plot_tables(&rep)[0].text;
    assert_eq!(t.lines().count(), 2);
}

#[test]
fn config_file_round_trip_and_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        seed: 5,
        ..ExperimentConfig::new(Experiment::CoveringTest {
            instances: 3,
            disks: 50,
            samples_per_disk: 100,
        })
    };
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    let path = write(dir.path(), "cfg.json", &text);
    let out = bin().args(["run", "--config"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"], serde_json::to_value(&cfg).unwrap());
    assert!(ExperimentConfig::from_json(r#"{"command":"covering-test","instances":1}"#).is_err());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", ARCLENGTH);
    let degenerate = bin()
        .args(["p2", "wandering", "--measure"])
        .arg(&m)
        .args(["--a", "1.5,0", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(degenerate.status.code(), Some(1));
    let missing = bin()
        .args(["cauchy", "eval", "--measure"])
        .arg(dir.path().join("nope.json"))
        .args(["--z", "0.1,0.2"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"components":[{"type":"wavelet"}]}"#);
    let out = bin().args(["cauchy", "eval", "--measure"]).arg(&bad).args(["--z", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));
}

#[test]
fn cauchy_eval_and_output_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", ARCLENGTH);
    let status = bin()
        .env("P2MU_OUT_DIR", dir.path())
        .args(["cauchy", "eval", "--measure"])
        .arg(&m)
        .args(["--z", "2,0", "--z", "-0.5,0.25"])
        .status()
        .unwrap();
    assert!(status.success());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("cauchy-eval.json")).unwrap()).unwrap();
    let rows = v["result"]["cauchy_eval"].as_array().unwrap();
    assert_eq!(rows[0]["value"][0], -0.5);
    assert_eq!(rows[1]["value"][0], 0.0);
}

#[test]
fn lens_export_is_a_readable_measure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lens.json");
    let status = bin().args(["lens", "export", "--lens-c", "0.3", "--out"]).arg(&out).status().unwrap();
    assert!(status.success());
    let spec = fs::read_to_string(dir.path().join("lens_measure.json")).unwrap();
    let mu = parse_measure(&spec, "lens").unwrap();
    assert!((mu.total_mass().re - 1.0).abs() < 1e-10);
}

#[test]
fn stolz_membership() {
    let out = bin()
        .args(["stolz", "--zeta", "0", "--r", "0.5", "--point", "0.9,0", "--point", "0,0.9"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["result"]["stolz"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["in_stolz"], true);
    assert_eq!(rows[1]["in_stolz"], false);
}
