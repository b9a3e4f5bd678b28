use std::process::Command;

fn wpvol(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wpvol"))
        .args(args)
        .env_remove("WPVOL_CACHE")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn compute_human_json_csv() {
    let (code, out, _) = wpvol(&["compute", "--genus", "1", "--boundaries", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1/192 m_(2) + 1/96 m_(1,1) + π²/12 m_(1) + π⁴/4\n");

    let (_, json, _) = wpvol(&["compute", "--genus", "1", "--boundaries", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["g"], 1);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);

    let (_, csv, _) = wpvol(&["compute", "--genus", "1", "--boundaries", "1", "--format", "csv"]);
    assert_eq!(csv, "g,n,p,x,num,den\n1,1,0,1,1,48\n1,1,1,0,1,12\n");
}

#[test]
fn exit_codes() {
    assert_eq!(wpvol(&["compute", "--genus", "0", "--boundaries", "2"]).0, 2);
    assert_eq!(wpvol(&["verify", "--suite", "bogus"]).0, 2);
    assert_eq!(wpvol(&["census", "--genus", "4", "--boundaries", "1"]).0, 3);
    let (code, out, _) = wpvol(&["verify", "--suite", "string-dilaton"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 failed"));
}

#[test]
fn verify_table_json() {
    let (code, out, _) = wpvol(&["verify", "--suite", "table", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 21);
}

#[test]
fn table_reproduces_last_row() {
    let (code, out, _) = wpvol(&["table"]);
    assert_eq!(code, 0);
    let last = out.lines().find(|l| l.starts_with("V_(5,1)")).unwrap();
    assert!(last.ends_with("21185241498983729441π²⁶/2824576634880000"), "{last}");
    assert_eq!(wpvol(&["table"]).1, out);
}

#[test]
fn cache_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    let p = path.to_str().unwrap();
    assert_eq!(wpvol(&["--cache", p, "compute", "--genus", "2", "--boundaries", "1"]).0, 0);
    let first = std::fs::read(&path).unwrap();
    assert!(!first.is_empty());

    let out = Command::new(env!("CARGO_BIN_EXE_wpvol"))
        .args(["compute", "--genus", "2", "--boundaries", "1"])
        .env("WPVOL_CACHE", p)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), first);

    std::fs::write(&path, "{\"version\": 1, \"volumes\": [{\"g\": 0, \"n\": 4, \"terms\": []}]}").unwrap();
    let (code, _, err) = wpvol(&["--cache", p, "compute", "--genus", "0", "--boundaries", "4"]);
    assert_ne!(code, 0);
    assert!(!err.is_empty());
}
