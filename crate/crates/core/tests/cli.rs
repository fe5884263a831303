use std::process::{Command, Output};

fn cshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cshift")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_image() {
    let o = cshift(&["eval", "--code", "gallery:d", "--point", "[|3]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[|2]");
}

#[test]
fn certify_exit_codes() {
    let o = cshift(&["certify", "--theorem", "1", "--code", "gallery:d"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = cshift(&["certify", "--theorem", "1", "--code", "gallery:f"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = cshift(&["certify", "--theorem", "2", "--code", "gallery:h"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("F_3"));
}

#[test]
fn falsify_inverse_finds_witness() {
    let o = cshift(&["falsify", "--code", "gallery:g", "--inverse"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness at coordinate"));
}

#[test]
fn hbc_encode_decode() {
    let o = cshift(&["hbc", "--m", "2", "--shift", "gallery:a", "--point", "[1,2,3]", "encode"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[[1,2],[2,3]]");
    let o = cshift(&["hbc", "--m", "2", "--shift", "gallery:a", "--point", "[[1,2],[2,3]]", "decode"]);
    assert_eq!(stdout(&o).trim(), "[1,2,3]");
}

#[test]
fn classify_and_gallery_case() {
    let o = cshift(&["classify", "--shift", "gallery:h"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("row_finite"));
    let o = cshift(&["gallery", "run", "--case", "g"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("g ")));
}

#[test]
fn code_from_file() {
    let dir = std::env::temp_dir().join(format!("cshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("drop.cs");
    std::fs::write(
        &path,
        "# halves, rounding up\nk = code { domain = shift { alphabet = naturals; forbidden = [] }; out = naturals; rule = {empty:empty, _:halfup@0} }\n",
    )
    .unwrap();
    let o = cshift(&["eval", "--code", path.to_str().unwrap(), "--point", "[3,4,5]"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "[2,2,3]");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn parse_errors_are_usage_errors() {
    let o = cshift(&["eval", "--code", "gallery:d", "--point", "[1,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}
