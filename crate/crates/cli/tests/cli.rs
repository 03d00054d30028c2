//! End-to-end tests against the built binary: exit codes, JSON shapes, and
//! golden runs of the three headline equations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nu"))
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(output: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&output.stdout);
    let first_line = text.lines().next().unwrap_or_else(|| panic!("no output: {text}"));
    serde_json::from_str(first_line).unwrap_or_else(|e| panic!("bad JSON '{first_line}': {e}"))
}

#[test]
fn check_reports_the_type() {
    let path = fixture("check_int.nu", "let x = new in 42");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"type": "int"}));

    let path = fixture("check_fn.nu", "fun (x:name). x = x");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"type": "name -> bool"}));
}

#[test]
fn parse_and_type_errors_exit_65() {
    let path = fixture("bad_syntax.nu", "new new");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(stdout_json(&out).get("error").is_some());

    let path = fixture("bad_type.nu", "true = 3");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn usage_errors_exit_64() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));

    let path = fixture("usage_int.nu", "42");
    let out = run(&["eval", path.to_str().unwrap(), "--semantics", "quantum"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn eval_concrete_json_shape() {
    let path = fixture("eval_me.nu", "let x = new in let y = new in x = y");
    let out = run(&["eval", path.to_str().unwrap(), "--semantics", "concrete", "--supply", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"status": "done", "supply": 7,
                           "value": {"kind": "bool", "value": false}})
    );
}

#[test]
fn eval_abstract_json_shape() {
    let path = fixture("eval_abs.nu", "new");
    let out = run(&[
        "eval",
        path.to_str().unwrap(),
        "--semantics",
        "abstract",
        "--world",
        "{0,1}",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"status": "done", "world": [0, 1, 2],
                           "value": {"kind": "name", "value": 2}})
    );
}

#[test]
fn eval_reports_divergence() {
    let path = fixture("loops.nu", "(fix f(x:int):int. f x) 0");
    let out = run(&["eval", path.to_str().unwrap(), "--fuel", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"status": "diverge"}));
}

#[test]
fn reads_term_from_stdin() {
    let mut child = bin()
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"let x = new in x")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"type": "name"}));
}

// The three headline equations, as the golden CLI surface.

#[test]
fn golden_drop_equation_direct() {
    let lhs = fixture("g_drop_lhs.nu", "let x = new in 42");
    let rhs = fixture("g_drop_rhs.nu", "42");
    let proof_path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("drop_proof.json");
    let out = run(&[
        "equiv",
        lhs.to_str().unwrap(),
        rhs.to_str().unwrap(),
        "--type",
        "int",
        "--method",
        "direct",
        "--emit-proof",
        proof_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verdict"], "equivalent");
    assert_eq!(verdict["certificate"]["kind"], "direct");
    assert_eq!(verdict["certificate"]["proof"]["kind"], "cospan");
    assert_eq!(verdict["certificate"]["proof"]["left"]["dom"], serde_json::json!([0]));
    assert_eq!(verdict["certificate"]["proof"]["right"]["dom"], serde_json::json!([]));

    let emitted: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&proof_path).unwrap()).unwrap();
    assert_eq!(emitted, verdict);
}

#[test]
fn golden_swap_equation_direct() {
    let lhs = fixture("g_swap_lhs.nu", "let x = new in let y = new in x");
    let rhs = fixture("g_swap_rhs.nu", "let y = new in let x = new in x");
    let out = run(&[
        "equiv",
        lhs.to_str().unwrap(),
        rhs.to_str().unwrap(),
        "--type",
        "name",
        "--method",
        "direct",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verdict"], "equivalent");
    // the certificate is the transposition of the two fresh names
    assert_eq!(
        verdict["certificate"]["proof"]["right"]["map"],
        serde_json::json!([[0, 1], [1, 0]])
    );
}

#[test]
fn golden_private_name_equation_three_ways() {
    let lhs = fixture("g_priv.nu", "let n = new in fun (x:name). x = n");
    let rhs = fixture("g_false.nu", "fun (x:name). false");
    let l = lhs.to_str().unwrap();
    let r = rhs.to_str().unwrap();

    let direct = run(&["equiv", l, r, "--type", "name -> bool", "--method", "direct"]);
    assert_eq!(direct.status.code(), Some(2));
    assert_eq!(stdout_json(&direct)["verdict"], "unknown");

    let parametric = run(&[
        "equiv", l, r, "--type", "name -> bool", "--method", "parametric", "--pretty",
    ]);
    assert_eq!(parametric.status.code(), Some(0));
    let verdict = stdout_json(&parametric);
    assert_eq!(verdict["verdict"], "equivalent");
    assert_eq!(verdict["certificate"]["kind"], "parametric");
    // the witness span must keep the private name out of its low point
    assert_eq!(verdict["certificate"]["witness"]["span"]["low"], serde_json::json!([]));
    let text = String::from_utf8_lossy(&parametric.stdout);
    assert!(text.contains("low point"), "pretty output: {text}");

    let oracle = run(&[
        "equiv", l, r, "--type", "name -> bool", "--method", "oracle", "--depth", "3",
    ]);
    assert_eq!(oracle.status.code(), Some(2));
    assert_eq!(stdout_json(&oracle)["verdict"], "unknown");
}

#[test]
fn distinguished_pairs_exit_1_with_replayable_observation() {
    let lhs = fixture("g_true.nu", "true");
    let rhs = fixture("g_false2.nu", "false");
    let out = run(&["equiv", lhs.to_str().unwrap(), rhs.to_str().unwrap(),
                    "--type", "bool", "--method", "oracle", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verdict"], "distinguished");
    let observation = verdict["observation"].as_str().unwrap();
    assert!(observation.contains("fix"), "observation: {observation}");
}

#[test]
fn corpus_is_byte_identical_across_runs() {
    let a = run(&["corpus", "--seed", "11", "--count", "25", "--depth", "4"]);
    let b = run(&["corpus", "--seed", "11", "--count", "25", "--depth", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // every line parses and typechecks through the check pipeline
    for line in String::from_utf8_lossy(&a.stdout).lines() {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        let term = row["term"].as_str().unwrap();
        let path = fixture("corpus_roundtrip.nu", term);
        let out = run(&["check", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "term failed check: {term}");
        assert_eq!(stdout_json(&out)["type"], row["type"]);
    }
}

#[test]
fn type_mismatch_between_flag_and_term_exits_65() {
    let lhs = fixture("g_int.nu", "42");
    let rhs = fixture("g_int2.nu", "43");
    let out = run(&["equiv", lhs.to_str().unwrap(), rhs.to_str().unwrap(),
                    "--type", "bool", "--method", "direct"]);
    assert_eq!(out.status.code(), Some(65));
}
