use std::process::{Command, Output};

fn zlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = zlab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn jump_set() {
    assert_eq!(stdout(&["jump-set", "--p", "2", "--n", "6"]), "1 2 3 6\n");
    assert_eq!(stdout(&["jump-set", "--p", "3", "--n", "3"]), "1 3\n");
}

#[test]
fn identity_csv() {
    let csv = stdout(&[
        "fundamental-matrix",
        "--p",
        "3",
        "--n",
        "2",
        "--m",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "a,b,ab\n1,0,0\n0,1,0\n0,0,1\n");
}

#[test]
fn matrix_json() {
    let out = stdout(&[
        "fundamental-matrix",
        "--p",
        "3",
        "--n",
        "3",
        "--m",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["K"], 2);
    assert_eq!(v["transposed"], true);
    let index: Vec<&str> = v["index"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(index.len(), 11);
    let r = index.iter().position(|&w| w == "abc").unwrap();
    let c = index.iter().position(|&w| w == "acb").unwrap();
    assert_eq!(v["matrix"][r][c], 2);
    assert_eq!(v["signed_matrix"][r][c], -1);
}

#[test]
fn products() {
    assert_eq!(stdout(&["shuffle", "ab", "c"]), "1 abc\n1 acb\n1 cab\n");
    assert_eq!(stdout(&["infiltrate", "a", "a"]), "1 a\n2 aa\n");
    let json = stdout(&["infiltrate", "ab", "a", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn verification_suites_pass() {
    let out = zlab(&["verify", "all", "--p", "5", "--n", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    for args in [
        &["verify", "shuffle-relations", "--p", "2", "--n", "3", "--m", "2"][..],
        &["verify", "section6", "--p", "2", "--i-max", "2", "--n-max", "4"],
        &["verify", "identities", "--p", "2", "--i", "2", "--j", "1"],
        &["verify", "binomial", "--p", "3"],
        &["ut-filtration", "--p", "2", "--i", "2", "--j", "0", "--n", "2"],
    ] {
        assert_eq!(zlab(args).status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn exit_codes_for_bad_arguments() {
    assert_eq!(
        zlab(&["fundamental-matrix", "--p", "4", "--n", "2", "--m", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(zlab(&["jump-set", "--p", "2"]).status.code(), Some(2));
    assert_eq!(zlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zlab(&["shuffle", "ab", "q"]).status.code(), Some(2));
    assert_eq!(
        zlab(&["dims", "--p", "3", "--n", "9", "--m", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn low_precision_warns() {
    let out = zlab(&[
        "fundamental-matrix",
        "--p",
        "2",
        "--n",
        "3",
        "--m",
        "2",
        "--precision",
        "2",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "fundamental-matrix",
        "--p",
        "2",
        "--n",
        "4",
        "--m",
        "3",
        "--format",
        "json",
    ];
    let first = stdout(&args);
    for threads in ["1", "4"] {
        let out = Command::new(env!("CARGO_BIN_EXE_zlab"))
            .args(args)
            .env("ZLAB_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), first);
    }
}

#[test]
fn lie_expansions() {
    assert_eq!(stdout(&["lie-expand", "aab"]), "[a,[a,b]]\n1 aab\n-2 aba\n1 baa\n");
    assert_eq!(zlab(&["lie-expand", "ba"]).status.code(), Some(2));
    let lyndon = stdout(&["lyndon", "--m", "2", "--lengths", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&lyndon).unwrap();
    assert_eq!(v["words"][1]["bracketing"], "[[a,b],b]");
}
