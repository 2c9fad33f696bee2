use std::path::PathBuf;
use std::process::Command;

#[test]
fn generated_header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/neumann_sto.h")).unwrap();
    for name in ["nsto_settings_new", "nsto_w_context_new", "nsto_w", "nsto_neumann_sum", "nsto_oracle_w", "NSTO_STATUS_OK"] {
        assert!(header.contains(name), "{name} missing");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let Ok(cc) = which_cc() else { return };
    let src = std::env::temp_dir().join(format!("nsto_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"neumann_sto.h\"\nint main(void) { NstoOutcome o; (void)o; return NSTO_STATUS_OK; }\n",
    )
    .unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    let _ = std::fs::remove_file(&src);
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()).ok_or(())
}
