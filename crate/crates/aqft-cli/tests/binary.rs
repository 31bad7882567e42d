use std::process::Command;

fn aqft(args: &[&str], out: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_aqft")).args(args).arg("--out").arg(out).output().unwrap()
}

fn scratch(tag: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("aqft-bin-{tag}-{}", std::process::id()))
}

#[test]
fn passing_suite_exits_zero_and_writes_the_report() {
    let out = scratch("ok");
    let r = aqft(&["characterize"], &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let report = std::fs::read_to_string(out.join("characterize.json")).unwrap();
    assert!(report.contains(r#""command": "characterize""#));
    assert!(!report.contains(r#""status": "fail""#));
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn empty_catalog_exits_nonzero_with_a_structured_error() {
    let out = scratch("empty");
    std::fs::create_dir_all(&out).unwrap();
    let cfg = out.join("empty.json");
    std::fs::write(&cfg, r#"{"catalog": {"seeds": []}}"#).unwrap();
    let r = aqft(&["catalog-build", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains(r#""error":"EmptyCatalog""#), "{err}");
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn failing_check_exits_one_and_names_it() {
    let out = scratch("fail");
    std::fs::create_dir_all(&out).unwrap();
    let cfg = out.join("tight.json");
    std::fs::write(&cfg, r#"{"tolerances": {"tol_quad": 1e-9}, "experiments": {"bumps": 2}}"#).unwrap();
    let r = aqft(&["kg-green", "--config", cfg.to_str().unwrap(), "--grid-h", "0.0628"], &out);
    assert_eq!(r.status.code(), Some(1));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains(r#""error":"CheckFailed""#), "{err}");
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn flags_override_the_config() {
    let out = scratch("flags");
    let r = aqft(&["extend", "--print-config", "--seed", "11", "--max-len", "2", "--grid-h", "0.031415926"], &out);
    assert!(r.status.success());
    let cfg = String::from_utf8_lossy(&r.stdout);
    assert!(cfg.contains(r#""seed": 11"#), "{cfg}");
    assert!(cfg.contains(r#""max_len": 2"#), "{cfg}");
    assert!(cfg.contains(r#""grid_n": 100"#), "{cfg}");
    let bad = aqft(&["extend", "--max-len", "0"], &out);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("InvalidConfig"));
}
