use std::path::Path;
use std::process::{Command, Output};

use qutrit_core::measures::{concurrence_mixed, concurrence_pure, negativity};
use qutrit_core::state_file::{to_document, StateSpec};
use qutrit_core::states::{schmidt_state, werner, Dims, PureState, SchmidtCoeffs};

fn qutrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qutrit"))
        .args(args)
        .env_remove("QUTRIT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_state(dir: &Path, name: &str, state: &StateSpec) -> String {
    let path = dir.join(name);
    std::fs::write(&path, to_document(state)).unwrap();
    path.to_str().unwrap().to_owned()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn measure_maximally_entangled() {
    let dir = tempfile::tempdir().unwrap();
    let b = 1.0 / 3f64.sqrt();
    let psi = schmidt_state(&SchmidtCoeffs::new([b, b, b]).unwrap());
    let file = write_state(dir.path(), "max.json", &StateSpec::Pure(psi.clone()));
    let out = qutrit(&["measure", &file, "--measure", "all"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!((value(&text, "c3") - 2.0).abs() < 1e-12);
    assert!((value(&text, "negativity") - 1.0).abs() < 1e-12);
    assert!((value(&text, "robustness") - 2.0).abs() < 1e-12);
    assert!((value(&text, "cereceda") - 1.0).abs() < 1e-12);
    // Printed values are the library values, digit for digit.
    assert_eq!(value(&text, "c3"), concurrence_pure(&psi).unwrap());
    assert_eq!(
        value(&text, "negativity"),
        negativity(&psi.projector()).unwrap()
    );
}

#[test]
fn measure_product_and_werner() {
    let dir = tempfile::tempdir().unwrap();
    let product = PureState::basis(Dims::QUTRITS, 0, 0).unwrap();
    let file = write_state(dir.path(), "00.json", &StateSpec::Pure(product));
    let text = stdout(&qutrit(&["measure", &file]));
    for key in ["c3", "negativity", "robustness", "cereceda"] {
        assert_eq!(value(&text, key), 0.0, "{key}");
    }

    let rho = werner(0.5).unwrap();
    let file = write_state(dir.path(), "w.json", &StateSpec::Density(rho.clone()));
    let out = qutrit(&["measure", &file, "--measure", "c3"]);
    let c3 = value(&stdout(&out), "c3");
    assert_eq!(c3, concurrence_mixed(&rho).unwrap());
    assert!((c3 - 2.0 / 3.0).abs() < 1e-10);
    assert_eq!(stdout(&out).lines().count(), 1);

    let out = qutrit(&["measure", &file, "--measure", "cereceda"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measure_rejects_invalid_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"dims":[3,3],"kind":"pure","data":[[1,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
    )
    .unwrap();
    let out = qutrit(&["measure", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not normalized"));

    let missing = dir.path().join("missing.json");
    assert_eq!(
        qutrit(&["measure", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn sweep_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = qutrit(&[
            "sweep",
            "--family",
            "werner",
            "--from",
            "0",
            "--to",
            "1",
            "--step",
            "0.01",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let csv = std::fs::read(&a).unwrap();
    assert_eq!(csv, std::fs::read(&b).unwrap());
    let csv = String::from_utf8(csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,c3,negativity,robustness");
    assert_eq!(lines.len(), 102);
    assert!(lines.contains(&"0.250000,0.000000,0.000000,0.000000"));
    assert!(!csv.contains('\r'));
}

#[test]
fn sweep_named_rows() {
    let text = stdout(&qutrit(&[
        "sweep",
        "--family",
        "pure-fig1",
        "--from",
        "0.6",
        "--to",
        "0.7",
        "--step",
        "0.0333333333333333",
    ]));
    let row = text
        .lines()
        .find(|l| l.starts_with("0.666667,"))
        .expect("x = 2/3 row");
    assert_eq!(row.split(',').nth(1), Some("2.00000"));
    assert_eq!(row.split(',').nth(2), Some("1.00000"));

    let text = stdout(&qutrit(&[
        "sweep",
        "--family",
        "embedded-werner",
        "--from",
        "0",
        "--to",
        "1",
        "--step",
        "0.333333333333333333",
    ]));
    let row = text.lines().nth(2).unwrap();
    assert!(row.starts_with("0.333333,0.000000,"), "{row}");
}

#[test]
fn sweep_errors() {
    let bad = qutrit(&[
        "sweep", "--family", "werner", "--from", "0.5", "--to", "0.2",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let bad = qutrit(&["sweep", "--family", "werner", "--step", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("no/such/dir.csv");
    let unwritable = qutrit(&[
        "sweep",
        "--family",
        "werner",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(unwritable.status.code(), Some(3));
}

#[test]
fn minimize_pure_limit_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_state(
        dir.path(),
        "w1.json",
        &StateSpec::Density(werner(1.0).unwrap()),
    );
    let report = dir.path().join("report.json");
    let out = qutrit(&["minimize", &file, "--report", report.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("min_value=2.000000"));
    assert!(text.contains("gap=0.000000"));
    assert!(!text.contains("FINDING"));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(doc["rank"], 1);
    assert_eq!(doc["finding"], false);
    assert!((doc["min_value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(doc["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn minimize_seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_state(
        dir.path(),
        "w.json",
        &StateSpec::Density(werner(0.6).unwrap()),
    );
    let args = [
        "minimize",
        file.as_str(),
        "--restarts",
        "2",
        "--budget",
        "20",
    ];
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qutrit"));
        cmd.args(args).env_remove("QUTRIT_SEED");
        if let Some(s) = seed {
            cmd.env("QUTRIT_SEED", s);
        }
        stdout(&cmd.output().unwrap())
    };
    assert!(run(Some("11")).contains("seed=11"));
    assert!(run(None).contains("seed=0"));
    assert_eq!(run(Some("11")), run(Some("11")));
}

#[test]
fn minimize_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_state(
        dir.path(),
        "w.json",
        &StateSpec::Density(werner(0.6).unwrap()),
    );
    let out = qutrit(&["minimize", &file, "--members", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qutrit(&["minimize", &file, "--restarts", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = qutrit(&["verify", "--suite", "operators"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));

    let out = qutrit(&["verify", "--suite", "reduction"]);
    assert!(out.status.success());

    let out = qutrit(&["verify", "--suite", "lu-experiment"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("random local unitaries: n=1000"));

    // The commonly quoted negativity closed form for the Werner family does not
    // hold, and the suite says so.
    let out = qutrit(&["verify", "--suite", "werner"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("PASS [werner] Werner lambda spectrum"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Werner negativity"));
}

#[test]
fn state_files_round_trip_through_measure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.json");
    let out = qutrit(&[
        "state",
        "--family",
        "pure-fig1",
        "--x",
        "0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&qutrit(&[
        "measure",
        path.to_str().unwrap(),
        "--measure",
        "c3",
    ]));
    let expected = 0.5 + 2.0 * (2.0 * 0.5 * 0.5f64).sqrt();
    assert!((value(&text, "c3") - expected).abs() < 1e-12);

    let out = qutrit(&["state", "--family", "werner"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qutrit(&["state", "--family", "schmidt", "--beta", "0.6,0.8"]);
    assert_eq!(out.status.code(), Some(2));
}
