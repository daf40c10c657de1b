//! The generated header declares the exported API and links from C.

use std::path::{Path, PathBuf};
use std::process::Command;

const EXPORTS: &[&str] = &[
    "refinv_version",
    "refinv_last_error_message",
    "refinv_matrix_new",
    "refinv_matrix_free",
    "refinv_matrix_dims",
    "refinv_matrix_copy_data",
    "refinv_system_new",
    "refinv_system_free",
    "refinv_system_dim",
    "refinv_system_e",
    "refinv_system_m_plus",
    "refinv_fundamental_matrix",
    "refinv_fundamental_derivative",
    "refinv_riccati_y",
    "refinv_z_value",
    "refinv_closure_explore",
    "refinv_closure_free",
    "refinv_closure_summary",
    "refinv_closure_to_json",
    "refinv_closure_verify",
];

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

/// `target/<profile>`, two levels above the test executable.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().expect("test executable path");
    exe.parent()
        .and_then(Path::parent)
        .expect("target layout")
        .to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(include_dir().join("refinv.h")).expect("header generated");
    for name in EXPORTS {
        assert!(header.contains(&format!("{name}(")), "missing {name}");
    }
    for ty in [
        "typedef struct RefinvMatrix RefinvMatrix;",
        "typedef struct RefinvSystem RefinvSystem;",
    ] {
        assert!(header.contains(ty), "missing opaque {ty}");
    }
    assert!(header.contains("REFINV_STATUS_OK = 0"));
}

#[test]
fn c_program_links_against_static_library() {
    if !have_cc() {
        eprintln!("no C compiler on PATH, skipping");
        return;
    }
    let lib = profile_dir().join("librefinv_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().expect("temp dir");
    let exe = dir.path().join("smoke");
    let source = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let build = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(include_dir())
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("cc runs");
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let run = Command::new(&exe).output().expect("smoke test runs");
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
