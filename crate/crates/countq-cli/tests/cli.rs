//! End-to-end tests of the `countq` binary: exit codes, output shapes, and
//! env overrides.

use std::path::Path;
use std::process::{Command, Output};

fn countq(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_countq"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const XOR_PRED: &str = "inputs 0 2\ngate g1 XOR y0 y1\noutput g1\n";
const CONST1_PRED: &str = "inputs 0 1\ngate g1 CONST1\noutput g1\n";

#[test]
fn gap_command_prints_counts() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "xor.pred", XOR_PRED);
    let out = countq(dir.path(), &["gap", "xor.pred"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "A=2 R=2 gap=0");
}

#[test]
fn gap_rejects_malformed_files_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.pred", "inputs 0 1\ngate g1 NAND y0\noutput g1\n");
    let out = countq(dir.path(), &["gap", "bad.pred"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn simulate_reports_exact_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.pred", CONST1_PRED);
    let out = countq(dir.path(), &["simulate", "one.pred"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(0-1*sqrt2)/2^1"), "{text}");
    assert!(text.contains("-0.7071067811"), "{text}");
    assert!(text.contains("gap=1 consistent"), "{text}");
}

#[test]
fn simulate_tsv_has_a_stable_header() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "xor.pred", XOR_PRED);
    let out = countq(dir.path(), &["simulate", "xor.pred", "--variant", "rational", "--tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let record: Vec<&str> = lines.next().unwrap().split('\t').collect();
    assert_eq!(header[0], "command");
    assert_eq!(header.len(), record.len());
    assert_eq!(record[0], "simulate");
    assert_eq!(record[1], "rational");
    // balanced predicate: amplitude exactly zero
    let amp_idx = header.iter().position(|h| *h == "amplitude").unwrap();
    assert_eq!(record[amp_idx], "0");
}

#[test]
fn simulate_trace_prints_layers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.pred", CONST1_PRED);
    let out = countq(dir.path(), &["simulate", "one.pred", "--trace"]);
    let text = stdout(&out);
    assert!(text.contains("circuit: H y0; oracle b^=P(x,y); H y0; H b; accept |0,1>"), "{text}");
    assert!(text.contains("layer 1: 2 terms, norm=1"), "{text}");
}

#[test]
fn simulate_cap_exceeded_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "wide.pred",
        "inputs 0 6\ngate g1 CONST1\noutput g1\n",
    );
    let out = countq(
        dir.path(),
        &["simulate", "wide.pred", "--max-witness-bits", "4"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds cap"), "{}", stderr(&out));
}

#[test]
fn unknown_variant_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.pred", CONST1_PRED);
    let out = countq(dir.path(), &["simulate", "one.pred", "--variant", "cubic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qap_exit_codes_follow_the_decision() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.pred", CONST1_PRED);
    write(dir.path(), "xor.pred", XOR_PRED);
    // constant-true pipeline: accepting amplitude -1/sqrt2, possible
    write(
        dir.path(),
        "possible.circ",
        "field poly -2 0 1 root 1 2\nqubits 2\ninit 00\n\
         g1 0 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         oracle xor 1 one.pred\n\
         g1 0 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         g1 1 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         accept 01\n",
    );
    let out = countq(dir.path(), &["qap", "possible.circ"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("POSSIBLE"), "{}", stdout(&out));

    // balanced predicate: the accepting amplitude cancels exactly
    write(
        dir.path(),
        "zero.circ",
        "field poly -2 0 1 root 1 2\nqubits 3\ninit 000\n\
         g1 0 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         g1 1 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         oracle xor 2 xor.pred\n\
         g1 0 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         g1 1 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         g1 2 [0,1/2] [0,1/2] [0,1/2] [0,-1/2]\n\
         accept 001\n",
    );
    let out = countq(dir.path(), &["qap", "zero.circ"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ZERO"), "{}", stdout(&out));

    // non-unitary gate: input error
    write(
        dir.path(),
        "bad.circ",
        "field rational\nqubits 1\ninit 0\ng1 0 1 0 1 1\naccept 1\n",
    );
    let out = countq(dir.path(), &["qap", "bad.circ"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qap_trace_prints_the_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "a.circ",
        "field rational\nqubits 1\ninit 0\ng1 0 3/5 -4/5 4/5 3/5\naccept 1\n",
    );
    let out = countq(dir.path(), &["qap", "a.circ", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("decomposition"), "{text}");
    assert!(text.contains("16/25"), "{text}");
}

#[test]
fn gni_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.graph", "3\n0 1\n1 2\n0 2\n");
    write(dir.path(), "path.graph", "3\n0 1\n1 2\n");
    write(dir.path(), "path2.graph", "3\n0 2\n1 2\n");
    write(dir.path(), "small.graph", "2\n0 1\n");

    let out = countq(dir.path(), &["gni", "tri.graph", "path.graph"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NON-ISOMORPHIC (amplitude != 0)"));

    let out = countq(dir.path(), &["gni", "path.graph", "path2.graph"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ISOMORPHIC (amplitude = 0)"));

    let out = countq(dir.path(), &["gni", "tri.graph", "small.graph"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("different vertex counts"));

    // vertex cap
    write(dir.path(), "big.graph", "7\n0 1\n");
    let out = countq(dir.path(), &["gni", "big.graph", "big.graph"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn digits_env_override() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.pred", CONST1_PRED);
    let out = Command::new(env!("CARGO_BIN_EXE_countq"))
        .current_dir(dir.path())
        .env("COUNTQ_DIGITS", "3")
        .args(["simulate", "one.pred"])
        .output()
        .unwrap();
    assert!(stdout(&out).contains("-0.707)"), "{}", stdout(&out));
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.pred", "inputs 0 12\ngate g1 CONST1\noutput g1\n");
    let one = countq(dir.path(), &["--threads", "1", "gap", "one.pred"]);
    let many = countq(dir.path(), &["--threads", "8", "gap", "one.pred"]);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.status.code(), many.status.code());
}

#[test]
fn selftest_quick_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = countq(dir.path(), &["selftest", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("all 12 checks passed"), "{}", stdout(&out));
}
