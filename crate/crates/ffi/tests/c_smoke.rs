use std::path::{Path, PathBuf};
use std::process::Command;

/// Directory holding the library artifacts next to this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = artifact_dir().join("libstartflow_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let exe = out_dir.join("startflow_smoke");

    let status = Command::new(&compiler)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror"])
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap_or_else(|e| panic!("running {compiler}: {e}"));
    assert!(status.success(), "compilation failed");

    let output = Command::new(&exe)
        .arg(manifest.join("../core/fixtures/valid/caa.sfw"))
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(
        output.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(stdout.trim(), format!("startflow {} ok", env!("CARGO_PKG_VERSION")));
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/startflow.h")).unwrap();
    for symbol in [
        "sf_project_parse",
        "sf_project_free",
        "sf_project_format",
        "sf_project_check",
        "sf_project_dot",
        "sf_project_action_count",
        "sf_project_metrics",
        "sf_eval_summarize_csv",
        "sf_tam_summarize_csv",
        "sf_string_free",
        "sf_last_error",
        "sf_version",
        "SF_STATUS_OK = 0",
        "typedef struct SfProject SfProject;",
    ] {
        assert!(header.contains(symbol), "{symbol}");
    }
}
