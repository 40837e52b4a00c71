use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn flatnorm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatnorm")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn info_on_torus() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(flatnorm(&["example", "torus", "--emit", "t.json"], dir.path()).status.code(), Some(0));
    let out = flatnorm(&["info", "t.json", "--json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["genus"], 1);
    assert_eq!(v["systole"], 1.0);
}

#[test]
fn kw_scan_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = flatnorm(&["kw-scan", "--eps", "0.1,0.05", "--csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "eps,r,agy,teich_upper,teich_lower,lower_check,upper_check");
    assert!(lines[1].starts_with("0.1,"));
}

#[test]
fn unclosed_triangle_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"kind":"translation","triangles":[[0,1,2],[3,4,5]],
        "opposite":[[0,3],[1,4],[2,5]],
        "vectors":{"0":[1,0],"1":[0,1],"2":[-1,-0.5],"3":[-1,0],"4":[0,-1],"5":[1,0.5]}}"#;
    fs::write(dir.path().join("bad.json"), doc).unwrap();
    let out = flatnorm(&["validate", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not closed"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(flatnorm(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(flatnorm(&["example", "klein-bottle"], dir.path()).status.code(), Some(2));
    assert_eq!(flatnorm(&["kw-scan", "--eps", "0.7"], dir.path()).status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    flatnorm(&["example", "octagon", "--emit", "o.json"], dir.path());
    let run = |threads: &str| stdout(&flatnorm(&["saddles", "o.json", "--max-length", "2.5", "--threads", threads, "--json"], dir.path()));
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("3"));
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn compare_on_principal_example() {
    let dir = tempfile::tempdir().unwrap();
    let emit = ["example", "principal-genus2", "--emit", "q.json", "--cochain", "conj-omega", "--cochain-out", "c.json"];
    assert_eq!(flatnorm(&emit, dir.path()).status.code(), Some(0));
    let out = flatnorm(&["compare", "q.json", "--cochain", "c.json", "--json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["anti_invariant"], true);
    assert_eq!(v["lower_check_advisory"], false);
    assert_eq!(v["lower_constant_check"], true);
    assert_eq!(v["upper_constant_check"], true);
}

#[test]
fn cover_of_translation_surface_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    flatnorm(&["example", "torus", "--emit", "t.json"], dir.path());
    let out = flatnorm(&["cover", "t.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
