use std::process::Command;

fn cosym(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cosym")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn gallery_list_names_every_entry() {
    let (code, out, _) = cosym(&["gallery", "list"]);
    assert_eq!(code, 0);
    for name in ["std3", "rotation", "self_bimodule", "reeb_flow_double"] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn exit_code_follows_the_report() {
    assert_eq!(cosym(&["gallery", "run", "skew3"]).0, 0);
    assert_eq!(cosym(&["gallery", "run", "reeb_flow_double"]).0, 1);
    assert_eq!(cosym(&["gallery", "run", "nonexistent"]).0, 2);
}

#[test]
fn exported_manifest_checks_with_json_output() {
    let (code, manifest, _) = cosym(&["gallery", "export", "skew3"]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("cosym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("skew3.json");
    std::fs::write(&path, manifest).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, err) = cosym(&["check", p, "--format", "json", "--seed", "9", "--box", "-2", "2"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["artifacts"]["structure.skew3.reeb"], "-d/dy + d/dz");
    let (_, again, _) = cosym(&["check", p, "--format", "json", "--seed", "9", "--box", "-2", "2"]);
    assert_eq!(out, again);
    let (code, out, _) = cosym(&["check", p, "--select", "morita"]);
    assert_eq!(code, 1);
    assert!(out.contains("VACUOUS"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mutation_is_detected() {
    let (code, _, err) = cosym(&[
        "mutate",
        "extension_tr1",
        "--target",
        "/groupoids/TR1xR/eta/terms/t",
        "--replace",
        "1 + g",
        "--check",
        "groupoid.TR1xR.multiplicative.multiplicative_eta",
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = cosym(&["mutate", "std3", "--target", "/structures/std3/eta/terms/q", "--replace", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("mutation target"), "{err}");
    let (code, _, err) = cosym(&["mutate", "std3", "--target", "/structures/std3/omega/terms/x y", "--replace", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("not detected"), "{err}");
}
