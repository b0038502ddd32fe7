use std::fs;
use std::process::{Command, Output};

fn patglass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patglass"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .unwrap()
}

#[test]
fn unknown_stage_is_rejected() {
    let out = patglass(&["bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_stage_is_rejected() {
    assert_ne!(patglass(&[]).status.code(), Some(0));
}

#[test]
fn missing_input_fails_the_stage() {
    let d = tempfile::tempdir().unwrap();
    let out = patglass(&["extract", "--out", d.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_config_exits_with_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.toml");
    fs::write(&cfg, "[paths]\nno_such_key = 1\n").unwrap();
    let out = patglass(&["--config", cfg.to_str().unwrap(), "filter"]);
    assert_eq!(out.status.code(), Some(1));

    fs::write(&cfg, "chunk_size = 0\n").unwrap();
    let out = patglass(&["--config", cfg.to_str().unwrap(), "filter"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stage_flag_and_positional_agree() {
    let d = tempfile::tempdir().unwrap();
    let out_dir = d.path().to_str().unwrap();
    fs::write(d.path().join("consolidated.csv"), "SiO2,Na2O,nd,patent_id\n70,30,1.5,us1_b0\n60,30,1.5,us1_b0\n").unwrap();
    fs::write(d.path().join("units.csv"), "publication_number,unit\n").unwrap();

    let a = patglass(&["filter", "--out", out_dir]);
    assert!(a.status.success());
    let first = fs::read(d.path().join("filter/filtered.csv")).unwrap();
    let b = patglass(&["--stage", "filter", "--out", out_dir]);
    assert!(b.status.success());
    assert_eq!(fs::read(d.path().join("filter/filtered.csv")).unwrap(), first);

    let report: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(report["stage"], "filter");
    assert_eq!(report["rows_in"], 2);
    assert_eq!(report["rows_out"], 1);
    assert_eq!(report["drops"]["closure"], 1);
}

#[test]
fn positional_and_flag_together_are_rejected() {
    assert_eq!(patglass(&["filter", "--stage", "optics"]).status.code(), Some(1));
}
