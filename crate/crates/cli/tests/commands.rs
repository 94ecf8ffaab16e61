use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use multinil::formats::{emit_json, parse_json, parse_map};
use multinil::freenil::TheoremReport;
use multinil_cli::{CheckReport, InvertReport, JacobianReport};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn multinil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multinil"))
        .args(args)
        .env_remove("MULTINIL_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_without_timing(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_tr2_reports_the_three_indices() {
    let alg = corpus("tr2.alg.json");
    let out = multinil(&[
        "check", "--algebra", path(&alg), "--engel-max", "5", "--yagzhev-max", "6", "--gerst-max", "5", "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r: CheckReport = parse_json(&stdout(&out)).unwrap();
    assert_eq!((r.engel, r.yagzhev, r.gerstenhaber), (Some(2), Some(3), Some(2)));
}

#[test]
fn check_zero_algebra() {
    let out = multinil(&["check", "--algebra", path(&corpus("zero.alg.json")), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r: CheckReport = parse_json(&stdout(&out)).unwrap();
    assert_eq!((r.engel, r.yagzhev, r.gerstenhaber), (Some(1), Some(2), Some(1)));
}

#[test]
fn check_non_nil_algebra_still_completes() {
    let out = multinil(&["check", "--algebra", path(&corpus("cube.alg.json")), "--gerst-max", "4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("not within"));
}

#[test]
fn asymmetric_file_is_a_validation_error() {
    let out = multinil(&["check", "--algebra", path(&corpus("asymmetric.alg.json"))]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("symmetry violation"), "{}", stderr(&out));
}

#[test]
fn malformed_file_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.alg.json");
    std::fs::write(
        &file,
        "{\n  \"arity\": 2,\n  \"dim\": 2,\n  \"entries\": [\n    {\"inputs\": [1, 1], \"output\": 2, \"value\": 1.5}\n  ]\n}\n",
    )
    .unwrap();
    let out = multinil(&["check", "--algebra", path(&file)]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("line 5"), "{err}");
    assert!(err.contains("entries[0].value"), "{err}");
    let out = multinil(&["check", "--algebra", path(&dir.path().join("missing.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invert_tr2_map() {
    let dir = tempfile::tempdir().unwrap();
    let inverse = dir.path().join("inverse.map.json");
    let out = multinil(&[
        "invert",
        "--map",
        path(&corpus("tr2.map.json")),
        "--degree",
        "2",
        "--format",
        "json",
        "--inverse-out",
        path(&inverse),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r: InvertReport = parse_json(&stdout(&out)).unwrap();
    assert_eq!(serde_json::to_value(r.verification.status).unwrap(), "EXACT");
    let g = parse_map(&std::fs::read_to_string(&inverse).unwrap()).unwrap();
    let shown: Vec<String> = g.coords().iter().map(ToString::to_string).collect();
    assert_eq!(shown, ["Y1", "Y1^2 + Y2"]);
    assert_eq!(r.inverse, multinil::formats::MapDoc::from_map(&g));
}

#[test]
fn invert_identity_and_bad_maps() {
    let out = multinil(&["invert", "--map", path(&corpus("identity.map.json")), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r: InvertReport = parse_json(&stdout(&out)).unwrap();
    assert_eq!(r.degree_source, "identity");
    let out = multinil(&["invert", "--map", path(&corpus("mixed-degree.map.json"))]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not homogeneous"));
}

#[test]
fn jacobian_prints_matrix_and_determinant() {
    let out = multinil(&["jacobian", "--map", path(&corpus("tr2.map.json")), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r: JacobianReport = parse_json(&stdout(&out)).unwrap();
    assert_eq!(r.det, "1");
    assert_eq!(r.matrix[1][0], "-2*X1");
    let out = multinil(&["jacobian", "--algebra", path(&corpus("cube.alg.json"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("det J_F = -3*X1^2 + 1"), "{}", stdout(&out));
}

#[test]
fn verify_theorem_small_instance() {
    let out = multinil(&["verify-theorem", "-d", "2", "-p", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r: TheoremReport = parse_json(&stdout(&out)).unwrap();
    assert_eq!(r.n, Some(3));
    assert_eq!(r.records[0].space_dim, 15);
    assert!(r.records[0].certificate_digest.is_some());
}

#[test]
fn resource_cap_is_its_own_exit_code() {
    let out = multinil(&["verify-theorem", "-d", "2", "-p", "4", "--max-basis-trees", "100"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("NOT ATTEMPTED"));
}

#[test]
fn bad_parameters_are_input_errors() {
    assert_eq!(code(&multinil(&["verify-theorem", "-d", "1", "-p", "3"])), 2);
    assert_eq!(code(&multinil(&["verify-theorem", "-d", "2"])), 2);
    assert_eq!(code(&multinil(&["check", "--algebra", path(&corpus("tr2.alg.json")), "--engel-max", "0"])), 2);
}

#[test]
fn reports_are_identical_across_runs_and_worker_counts() {
    let args = ["verify-theorem", "-d", "2", "-p", "4", "--format", "json"];
    let runs: Vec<Value> = ["1", "4", "4"]
        .iter()
        .map(|w| {
            let mut a = args.to_vec();
            a.extend(["--workers", w]);
            let out = multinil(&a);
            assert_eq!(code(&out), 0);
            json_without_timing(&stdout(&out))
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let prescreen_off = multinil(&[&args[..], &["--no-prescreen"]].concat());
    let exact = json_without_timing(&stdout(&prescreen_off));
    for field in ["verdict", "ideal_rank", "space_dim"] {
        assert_eq!(exact["records"][0][field], runs[0]["records"][0][field]);
    }
}

#[test]
fn worker_count_from_environment() {
    let alg = corpus("tr3.alg.json");
    let docs: Vec<Value> = ["1", "3"]
        .iter()
        .map(|w| {
            let out = Command::new(env!("CARGO_BIN_EXE_multinil"))
                .args(["check", "--algebra", path(&alg), "--format", "json"])
                .env("MULTINIL_WORKERS", w)
                .output()
                .unwrap();
            assert_eq!(code(&out), 0);
            json_without_timing(&stdout(&out))
        })
        .collect();
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn structured_reports_round_trip() {
    let out = multinil(&["verify-theorem", "-d", "2", "-p", "3", "--format", "json"]);
    let text = stdout(&out);
    let r: TheoremReport = parse_json(&text).unwrap();
    assert_eq!(emit_json(&r), text);
    let out = multinil(&["jacobian", "--algebra", path(&corpus("tr3.alg.json")), "--format", "json"]);
    let text = stdout(&out);
    let r: JacobianReport = parse_json(&text).unwrap();
    assert_eq!(emit_json(&r), text);
}

#[test]
fn out_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = multinil(&[
        "check",
        "--algebra",
        path(&corpus("tr4.alg.json")),
        "--format",
        "json",
        "--out",
        path(&target),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let r: CheckReport = parse_json(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!((r.engel, r.yagzhev, r.gerstenhaber), (Some(4), Some(5), Some(4)));
}

#[test]
fn user_supplied_algebras_run_through_every_command() {
    let Ok(dir) = std::fs::read_dir(corpus("user")) else {
        return;
    };
    for entry in dir.flatten() {
        let file = entry.path();
        if !file.to_string_lossy().ends_with(".alg.json") {
            continue;
        }
        let out = multinil(&["check", "--algebra", path(&file), "--format", "json"]);
        assert_eq!(code(&out), 0, "{}: {}", file.display(), stderr(&out));
        let out = multinil(&["jacobian", "--algebra", path(&file), "--format", "json"]);
        assert!(matches!(code(&out), 0 | 1), "{}: {}", file.display(), stderr(&out));
    }
}
