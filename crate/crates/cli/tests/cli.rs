use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bvcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvcalc"))
        .args(args)
        .current_dir(root())
        .env_remove("BV_MODEL_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_su2_passes() {
    let o = bvcalc(&["check", "models/su2.model"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn check_nonunimodular_fails_with_diagnosis() {
    let o = bvcalc(&[
        "check",
        "models/nonunimodular.model",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("not unimodular"), "{text}");
    assert!(text.contains("config.command=check"));
}

#[test]
fn model_dir_resolves_bare_names() {
    let o = bvcalc(&["check", "su2", "--model-dir", "models"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn malformed_model_reports_location() {
    let o = bvcalc(&["check", "models/not_antisymmetric.model"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = bvcalc(&["check", "models/does_not_exist.model"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).starts_with("error: cannot read"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn algebra_values() {
    let run = |args: &[&str]| stdout(&bvcalc(args)).lines().nth(1).unwrap().to_string();
    assert_eq!(run(&["algebra", "delta", "x1*xs1"]), "1");
    assert_eq!(run(&["algebra", "delta", "c1*cs1"]), "-1");
    assert_eq!(run(&["algebra", "bracket", "x1", "xs1"]), "1");
    assert_eq!(run(&["algebra", "degree", "c1*cs1"]), "-1");
    let o = bvcalc(&["algebra", "delta", "x1 +"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn restrict_rejects_even_gauge_fixing() {
    let o = bvcalc(&["algebra", "restrict", "xs1", "--psi", "x1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn integrate_disk_area() {
    let o = bvcalc(&[
        "integrate",
        "fixtures/disk_area.fixture",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let value: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("value="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn integrate_modes_pass() {
    for args in [
        vec!["integrate", "fixtures/stokes_disk.fixture", "--stokes"],
        vec![
            "integrate",
            "fixtures/angular.fixture",
            "--homology",
            "circle",
            "ellipse",
        ],
        vec!["integrate", "fixtures/angular.fixture", "--sweep"],
    ] {
        let o = bvcalc(&args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}{}",
            stdout(&o),
            stderr(&o)
        );
    }
}

#[test]
fn degree_mismatch_is_a_contract_violation() {
    let o = bvcalc(&["integrate", "fixtures/mismatch.fixture"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn homology_of_non_closed_alpha_is_rejected() {
    let o = bvcalc(&[
        "integrate",
        "fixtures/stokes_disk.fixture",
        "--homology",
        "disk",
        "disk",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn selftest_flags() {
    let o = bvcalc(&["selftest", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bvcalc(&["selftest", "--trials", "50", "--order", "4", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("# bvcalc selftest inputs= seed=7 trials=50 order=4"));
}
