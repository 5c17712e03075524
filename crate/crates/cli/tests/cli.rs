//! Runs the built `qtestgen` binary against corpus files and scratch inputs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtestgen"))
        .args(args)
        .env("QTESTGEN_COLOR", "0")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(text: &str, suffix: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn compile_prints_the_cnot_mapping() {
    let o = run(&["compile", corpus("cnot5.qc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("unitary (2 qubits, 5 stages):"));
    assert!(text.contains("global phase: 0.7071-0.7071j"));
    for line in ["00 -> 00", "01 -> 11", "10 -> 10", "11 -> 01"] {
        assert!(text.contains(line), "missing {line}");
    }
}

#[test]
fn header_only_circuit_is_identity() {
    let f = scratch("qubits 2\n", ".qc");
    let o = run(&["compile", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("global phase: 1"));
    assert!(text.contains("11 -> 11"));
}

#[test]
fn parse_error_names_the_line() {
    let f = scratch("qubits 2\nstage S1 RX 1 +0.5pi\nstage S2 QQ 1 1\n", ".qc");
    let o = run(&["compile", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn non_permutative_circuit_exits_3() {
    let f = scratch("qubits 1\nstage S1 RX 1 +0.5pi\n", ".qc");
    let o = run(&["compile", path(&f)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not permutative"));
    let o = run(&["table", path(&f)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn nothing_detectable_exits_4() {
    let f = scratch("qubits 1\nstage S1 RZ 1 +0.5pi\n", ".qc");
    let o = run(&["plan", path(&f), "--faults", "removal"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("S1-removed"));
}

#[test]
fn table_csv_lists_classes_and_undetectables() {
    let o = run(&["table", corpus("cnot5.qc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("input,GC,"));
    assert!(header.ends_with(",S2-removed|S4-removed|S5-removed"));
    assert_eq!(lines.next().unwrap(), "00,00,1,.5");
    assert!(text.contains("# undetectable: X-Q1@D5"));
}

#[test]
fn table_markdown_has_test_vector_labels() {
    let o = run(&["table", corpus("cnot5.qc").to_str().unwrap(), "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("| Test Vector |"));
    assert!(text.contains("| T4(11) |"));
}

#[test]
fn classical_table_reports_the_output_difference() {
    let o = run(&["table", corpus("cnot.rc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# outputs"));
    assert!(text.contains("Sa0@2"));
    assert!(text.contains("# differences from the reference grid"));
}

#[test]
fn plan_reports_baseline() {
    let o = run(&["plan", corpus("cnot5.qc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("T1(00) x7 (repeated)"));
    assert!(text.contains("exhaustive: 4 vs plan: 8 executions"));
    let o = run(&[
        "plan",
        corpus("cnot5.qc").to_str().unwrap(),
        "--tau",
        "0.5",
        "--zeta",
        "3",
    ]);
    assert!(
        stdout(&o).contains("exhaustive: 12 vs plan: 2 executions"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn plan_csv_rows() {
    let o = run(&["plan", corpus("cnot.rc").to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("kind,name,input,repetitions,gamma\n"));
    let tests: Vec<&str> = text.lines().filter(|l| l.starts_with("test,")).collect();
    assert_eq!(tests, ["test,,00,1,", "test,,01,1,", "test,,10,1,"]);
    assert!(text.contains("baseline,plan,,3,"));
}

#[test]
fn unreachable_threshold_fails() {
    let o = run(&["plan", corpus("cnot5.qc").to_str().unwrap(), "--tau", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn bad_arguments_are_rejected() {
    let file = corpus("cnot5.qc");
    let file = file.to_str().unwrap();
    assert_ne!(run(&["table", file, "--format", "xml"]).status.code(), Some(0));
    assert_ne!(run(&["plan", file, "--zeta", "0"]).status.code(), Some(0));
    assert_ne!(run(&["table", file, "--faults", "bitflip"]).status.code(), Some(0));
    assert_ne!(run(&["compile", "/nonexistent/file.qc"]).status.code(), Some(0));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["table", "--format", "md"],
        vec!["plan"],
        vec!["plan", "--format", "csv", "--precision", "3"],
    ] {
        let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        full.insert(1, corpus("cnot5.qc").to_str().unwrap().to_string());
        let full: Vec<&str> = full.iter().map(String::as_str).collect();
        assert_eq!(run(&full).stdout, run(&full).stdout);
    }
}

#[test]
fn verify_reference_has_no_failures() {
    let o = run(&["verify-reference"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().last().unwrap().ends_with("0 fail"));
    assert!(text.contains("ERRATUM"));
}
