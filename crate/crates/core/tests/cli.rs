use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn mufkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mufkit"))
        .args(args)
        .env_remove("MUFKIT_EPS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn construct(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", s(&out)]);
    let o = mufkit(&full);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn every_construction_verifies() {
    let dir = TempDir::new().unwrap();
    let d3 = construct(&dir, "d3.json", &["d3-real-family", "--r0", "0.75"]);
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("mub3.json", vec!["mub", "--dim", "3"]),
        ("mub5.json", vec!["mub", "--dim", "5"]),
        ("qf.json", vec!["qubit-fiducial"]),
        ("sic.json", vec!["wh-orbit", "--input", s(&d3)]),
        ("pair.json", vec!["qubit-pair", "--theta", "0.3", "--eta", "1.0", "--beta", "0.9"]),
        ("partner.json", vec!["partner", "--dim", "5", "--seed", "3", "--mu-index", "2"]),
        ("zt.json", vec!["zauner-triplet", "--dim", "7"]),
        ("ze.json", vec!["zauner-eigenvector", "--dim", "4", "--index", "1"]),
        ("st.json", vec!["state", "--re", "1,2,-3", "--im", "0,1,0"]),
    ];
    for (name, args) in cases {
        let f = construct(&dir, name, &args);
        let o = mufkit(&["verify", s(&f)]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
}

#[test]
fn verify_mub_reports_overlap() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "mub.json", &["mub", "--dim", "3"]);
    let o = mufkit(&["verify", s(&f), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["overlap"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_failure_and_parse_error_codes() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "fid.json", &["d3-real-family", "--r0", "0.78"]);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let x = doc["frames"][0][0][1][0].as_f64().unwrap();
    doc["frames"][0][0][1][0] = serde_json::json!(x + 1e-3);
    let perturbed = path(&dir, "perturbed.json");
    std::fs::write(&perturbed, doc.to_string()).unwrap();
    let o = mufkit(&["verify", s(&perturbed), "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["max_overlap_error"].as_f64().unwrap() > 1e-4);

    doc["frames"][0][0].as_array_mut().unwrap().pop();
    let malformed = path(&dir, "malformed.json");
    std::fs::write(&malformed, doc.to_string()).unwrap();
    assert_eq!(code(&mufkit(&["verify", s(&malformed)])), 2);
    assert_eq!(code(&mufkit(&["verify", s(&path(&dir, "missing.json"))])), 2);
    assert_eq!(code(&mufkit(&["verify", s(&f), "--eps", "-1"])), 2);
}

#[test]
fn construct_rejects_invalid_parameters() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.json");
    let bad: Vec<Vec<&str>> = vec![
        vec!["mub", "--dim", "6"],
        vec!["qubit-pair", "--theta", "0", "--eta", "0.3", "--alpha", "1.2", "--beta", "1.0"],
        vec!["d3-real-family", "--r0", "0.9"],
        vec!["partner", "--dim", "3", "--mu-index", "99"],
    ];
    for args in bad {
        let mut full = vec!["construct"];
        full.extend_from_slice(&args);
        full.extend_from_slice(&["-o", s(&out)]);
        assert_eq!(code(&mufkit(&full)), 2, "{args:?}");
        assert!(!out.exists());
    }
    assert_eq!(code(&mufkit(&["construct", "nonsense", "-o", s(&out)])), 2);
}

#[test]
fn search_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    let args = |p: &Path| ["search", "--dim", "2", "--seed", "7", "--restarts", "20", "-o"].map(String::from).into_iter().chain([s(p).to_string()]).collect::<Vec<_>>();
    let run = |p: &Path| {
        let v = args(p);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        mufkit(&refs)
    };
    let (oa, ob) = (run(&a), run(&b));
    assert_eq!(code(&oa), 0);
    assert_eq!(stdout(&oa).replace(s(&a), "OUT"), stdout(&ob).replace(s(&b), "OUT"));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(stdout(&oa).contains("converged: true"));

    let o = mufkit(&["verify", s(&a), "--eps", "1e-12"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn analyze_paths() {
    let dir = TempDir::new().unwrap();
    let d3 = construct(&dir, "d3.json", &["d3-real-family", "--r0", "0.76"]);
    let o = mufkit(&["analyze", s(&d3), "--uncertainty", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["saturated"], true);
    assert!((v["entropy_sum"].as_f64().unwrap() - 4.0).abs() < 1e-9);

    let mub = construct(&dir, "mub.json", &["mub", "--dim", "3"]);
    let o = mufkit(&["analyze", s(&d3), "--uncertainty", "--bases", s(&mub)]);
    assert!(stdout(&o).contains("saturated: true"));

    let o = mufkit(&["analyze", s(&d3), "--params", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["free_parameters"], 3);

    let ze = construct(&dir, "ze.json", &["zauner-eigenvector", "--dim", "2"]);
    let o = mufkit(&["analyze", s(&ze), "--zauner", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mub_balanced"], true);
    assert_eq!(v["identical_distributions"], true);

    let real4 = construct(&dir, "r4.json", &["state", "--re", "0.5,-0.1,0.7,0.3"]);
    let o = mufkit(&["analyze", s(&real4), "--params"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("real state in even dimension"));

    assert_eq!(code(&mufkit(&["analyze", s(&d3)])), 2);
    assert_eq!(code(&mufkit(&["analyze", s(&mub), "--params"])), 2);
}

#[test]
fn env_tolerance_is_recorded() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "q.json");
    let o = Command::new(env!("CARGO_BIN_EXE_mufkit"))
        .args(["construct", "qubit-fiducial", "-o", s(&out)])
        .env("MUFKIT_EPS", "1e-9")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"tolerance\": 1.0000000000000001e-9") || text.contains("\"tolerance\": 1.0000000000000000e-9"));
}

#[test]
fn help_exits_cleanly() {
    let o = mufkit(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verify"));
    assert_eq!(code(&mufkit(&[])), 2);
}
