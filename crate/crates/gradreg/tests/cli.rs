//! End-to-end runs of the `gradreg` binary.

use std::path::PathBuf;
use std::process::Command;

use gradreg::gmod::ExtendedDegree;
use gradreg::report::validate;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn gradreg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_gradreg")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn report(args: &[&str]) -> Value {
    let r = gradreg(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    validate(&v).unwrap();
    v
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gradreg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn error_kind(r: &Run) -> String {
    let v: Value = serde_json::from_str(&r.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn algebra_reports_hilbert_data() {
    let v = report(&["algebra", "--catalog", "qplane", "--N", "4"]);
    assert_eq!(v["algebra"]["hilbert"], serde_json::json!([1, 2, 3, 4, 5]));
    let q = report(&["--field", "Q", "algebra", "--catalog", "ext2", "--N", "3"]);
    assert_eq!(q["algebra"]["hilbert"], serde_json::json!([1, 2, 1, 0]));
    assert_eq!(q["algebra"]["field"], "Q");
}

#[test]
fn dumped_presentation_builds_the_same_algebra() {
    let dump = report(&["catalog", "--dump", "tri2"]);
    let path = scratch("tri2.json");
    std::fs::write(&path, dump["results"]["entry"]["presentation"].to_string()).unwrap();
    let from_file = report(&["algebra", "--presentation", path.to_str().unwrap(), "--N", "5"]);
    let from_catalog = report(&["algebra", "--catalog", "tri2", "--N", "5"]);
    assert_eq!(from_file["algebra"]["hilbert"], from_catalog["algebra"]["hilbert"]);
    assert_eq!(from_file["results"]["associative"], from_catalog["results"]["associative"]);
    // Flags are catalog assertions; a file carries none.
    assert!(from_file["results"]["flags"]["noetherian"].is_null());
}

#[test]
fn input_errors_exit_two_with_a_json_error() {
    let path = scratch("bad.json");
    std::fs::write(
        &path,
        r#"{"field":"Q","vertices":["1"],"arrows":[{"name":"x","from":"1","to":"1","deg":1}],"relations":[[{"coef":"1","path":["x","z"]}]]}"#,
    )
    .unwrap();
    let r = gradreg(&["algebra", "--presentation", path.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (2, "UnknownSymbol"));

    std::fs::write(&path, "{not json").unwrap();
    let r = gradreg(&["algebra", "--presentation", path.to_str().unwrap()]);
    assert_eq!((r.code, error_kind(&r).as_str()), (2, "SyntaxError"));

    let r = gradreg(&["verify", "--catalog", "kron2", "--cm", "duality"]);
    assert_eq!((r.code, error_kind(&r).as_str()), (2, "MissingGorensteinData"));

    assert_eq!(gradreg(&["frobnicate"]).code, 2);
    assert_eq!(gradreg(&["--field", "12", "catalog"]).code, 2);
}

#[test]
fn out_flag_writes_the_same_report() {
    let path = scratch("reg.json");
    let args = ["reg", "--catalog", "poly2", "--module", "random:3"];
    let stdout = gradreg(&args).stdout;
    let mut with_out = vec!["--out", path.to_str().unwrap()];
    with_out.extend(args);
    let r = gradreg(&with_out);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn verify_outcomes_carry_parseable_degrees() {
    let v = report(&["verify", "--catalog", "qplane", "--instances", "4", "--seed", "7"]);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for side in ["left", "right"] {
            let d = ExtendedDegree::from_json(&c[side]).unwrap();
            assert_eq!(d.to_json(), c[side]);
        }
        assert_ne!(c["verdict"], "fails");
    }
}

#[test]
fn subcommands_produce_valid_reports() {
    for args in [
        &["resolve", "--catalog", "kron2", "--module", "simple"][..],
        &["reg", "--catalog", "dualnum", "--module", "trivial", "--cm", "duality"],
        &["tor", "--catalog", "poly2", "--module", "random:1", "--right", "trivial"],
        &["ext", "--catalog", "ext2", "--module", "simple"],
        &["twist", "--catalog", "kron2", "--shifts", "0,1"],
        &["catalog"],
    ] {
        report(args);
    }
}
