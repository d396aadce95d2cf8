use std::path::PathBuf;
use std::process::{Command, Output};

fn fricke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fricke")).args(args).output().expect("run fricke")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p11_fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/alpha_p11.txt")
}

fn without_timings(s: &str) -> String {
    s.lines().filter(|l| !l.starts_with("TIME.")).collect::<Vec<_>>().join("\n")
}

#[test]
fn expand_j_writes_rows_to_stdout() {
    let o = fricke(&["expand", "j", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1 1\n0 744\n1 196884\n2 21493760\n");
    assert!(stderr(&o).contains("COMMAND=expand"));
}

#[test]
fn expanded_table_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.txt");
    let o = fricke(&["expand", "g", "--p", "2", "--order", "80", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("2 80\n-1 1\n0 -24\n1 4372\n2 96256\n"));
    let o = fricke(&["verify", "--p", "2", "--alpha-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("VALUE.shift_constant=-816\n"));
    assert!(out.contains("PARAM.order=40\n"));
}

#[test]
fn corrupted_table_fails_with_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g3.txt");
    let o = fricke(&["expand", "g", "--p", "3", "--order", "60", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let bad: String = text
        .lines()
        .map(|l| if l.starts_with("15 ") { "15 0".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&path, bad).unwrap();
    let o = fricke(&["verify", "--p", "3", "--alpha-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    // α_15 enters c_5 through α_5 + 3 α_15
    assert!(out.contains("CHECK.constant_difference=FAIL first failing index 5\n"), "{out}");
    assert!(out.contains("CHECK.coefficient_relation=FAIL first failing index 5\n"));
    assert!(out.ends_with("RESULT=FAIL\n"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["expand", "phi", "--p", "11", "--order", "5"],
        vec!["verify", "--p", "37"],
        vec!["verify", "--p", "11"],
        vec!["digits", "--p", "3", "--n", "5", "--l", "3"],
        vec!["curve", "--p", "37"],
        vec!["expand", "bogus", "--order", "3"],
        vec!["uhat", "--p", "2", "--precision", "0"],
    ] {
        let o = fricke(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn malformed_table_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "11 3\n0 1\n2 5\n").unwrap();
    let o = fricke(&["verify", "--p", "11", "--alpha-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"));
    let o = fricke(&["verify", "--p", "11", "--alpha-file", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_ingested_p11() {
    let fixture = p11_fixture();
    let o = fricke(&["verify", "--p", "11", "--alpha-file", fixture.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("CHECK.coefficient_relation=PASS\n"));
    assert!(out.contains("CHECK.denominator_divisibility=PASS\n"));
    assert!(out.contains("VALUE.omega=symbolic\n"));
}

#[test]
fn curve_and_digits_reports() {
    let o = fricke(&["curve", "--p", "23"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["VALUE.points=6", "VALUE.h_K=3", "VALUE.h_2=3", "RESULT=PASS"] {
        assert!(out.contains(line), "{line}");
    }
    let o = fricke(&["digits", "--p", "2", "--n", "4", "--k", "3", "--l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("VALUE.h_direct=7\n"));
    let o = fricke(&["digits", "--p", "3", "--n", "0"]);
    assert!(stdout(&o).contains("VALUE.f_sequence=none"));
}

#[test]
fn uhat_passes_precision_through() {
    let o = fricke(&["uhat", "--p", "3", "--precision", "1e-10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("PARAM.precision=1e-10\n"));
    assert!(out.contains("CHECK.vanishing_sum=PASS\n"));
}

#[test]
fn reports_are_deterministic() {
    let a = fricke(&["verify", "--p", "7", "--order", "30"]);
    let b = fricke(&["verify", "--p", "7", "--order", "30"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timings(&stdout(&a)), without_timings(&stdout(&b)));
    let a = fricke(&["uhat", "--p", "5"]);
    let b = fricke(&["uhat", "--p", "5"]);
    assert_eq!(without_timings(&stdout(&a)), without_timings(&stdout(&b)));
}
