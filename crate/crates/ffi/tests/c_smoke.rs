use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    // Test builds link the rlib only; the archive comes from a plain build.
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "cylinderlab-ffi", "--lib"])
        .current_dir(&manifest)
        .status()
        .unwrap();
    assert!(built.success());
    let lib = profile_dir.join("libcylinderlab_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cylinderlab_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
