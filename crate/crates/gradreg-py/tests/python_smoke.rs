//! Loads the built extension into a Python interpreter and runs the smoke test.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn python_smoke_test() {
    // `cargo test` leaves the fresh cdylib next to the test binary in target/<profile>/deps.
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().join("libgradreg_py.so");
    if !lib.exists() {
        eprintln!("skipping: {} not built on this platform", lib.display());
        return;
    }
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let out = match Command::new("python3").arg(&script).env("GRADREG_PY_LIB", &lib).output() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("skipping: python3 unavailable ({e})");
            return;
        }
    };
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("smoke test passed"));
}
