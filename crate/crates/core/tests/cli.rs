use std::io::Write;
use std::process::{Command, Output};

use lquad::json::{mat, parse_value, q0_value, q3_value};
use lquad::qnormal::{reduce_q0_Zx, reduce_q3_Zx};
use serde_json::Value;

fn run_with(args: &[&str], input: &str) -> Output {
    let mut file = temp_file();
    file.1.write_all(input.as_bytes()).unwrap();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["-i", file.0.to_str().unwrap()]);
    let out = Command::new(env!("CARGO_BIN_EXE_lquad")).args(&full).output().unwrap();
    std::fs::remove_file(&file.0).unwrap();
    out
}

fn temp_file() -> (std::path::PathBuf, std::fs::File) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    let p = std::env::temp_dir().join(format!("lquad-cli-{}-{}.json", std::process::id(), N.fetch_add(1, Ordering::SeqCst)));
    let f = std::fs::File::create(&p).unwrap();
    (p, f)
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reduce_outputs() {
    let out = run_with(&["reduce", "--group", "q3zx"], "[[0,0],[0,0]]");
    assert_eq!(stdout_json(&out), serde_json::json!({"group": "q3zx", "value": []}));
    let out = run_with(&["reduce", "--group", "q0zx"], "[[[0,2],0],[0,0]]");
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"group": "q0zx", "s": 0, "t": [1], "u1": [1], "u2": [], "u3": []})
    );
}

#[test]
fn exit_codes_and_diagnostics() {
    let out = run_with(&["reduce", "--group", "q0zx"], "{");
    assert_eq!(out.status.code(), Some(2));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "parse");

    let out = run_with(&["reduce", "--group", "q0zx"], "[[0,1],[1,0]]");
    assert_eq!(out.status.code(), Some(3));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "membership");
}

#[test]
fn arf_modes() {
    let out = run_with(&["arf", "--mode", "classical"], r#"{"psi":[[1,1],[0,1]]}"#);
    assert_eq!(stdout_json(&out)["arf"], 1);

    // (K_M, psi_M; L_M) for M = diag(1, x^2) agrees with the reduction of M.
    let input = r#"{"psi":[[1,0,1,0],[0,[0,1],0,1],[0,0,1,0],[0,0,0,[0,0,1]]]}"#;
    let want = reduce_q3_Zx(&mat(&parse_value("[[1,0],[0,[0,0,1]]]").unwrap()).unwrap()).unwrap();
    assert_eq!(stdout_json(&run_with(&["arf", "--mode", "generalized"], input)), q3_value(&want));

    let input = r#"{"d":[[2,0],[0,2]],"delta":[[1,0],[0,[0,1]]],"phi":[[[0,2],0],[0,0]]}"#;
    let want = reduce_q0_Zx(&mat(&parse_value("[[[0,2],0],[0,0]]").unwrap()).unwrap()).unwrap();
    assert_eq!(stdout_json(&run_with(&["arf", "--mode", "linking"], input)), q0_value(&want));
}

#[test]
fn boundary_maps() {
    let out = run_with(&["boundary", "--n", "3", "--ring", "z"], r#"{"a":1}"#);
    assert_eq!(stdout_json(&out), serde_json::json!({"epsilon": -1, "psi": [[[1], [1]], [[], [1]]]}));
    let out = run_with(&["boundary", "--n", "1", "--ring", "z"], r#"{"a":1}"#);
    assert_eq!(stdout_json(&out), serde_json::json!({"epsilon": 1, "psi": [[[], [-1]], [[], [-2]]]}));
}

#[test]
fn eval_linking_values() {
    let input = r#"{"d":[[2,0],[0,2]],"delta":[[1,0],[0,[0,1]]],"phi":[[[0,2],0],[0,0]],
        "x":{"x1":[1,0],"x0":[0,0]},"y":{"x1":[1,1],"x0":[1,0]}}"#;
    let v = stdout_json(&run_with(&["eval-linking"], input));
    assert_eq!(v["mu"], serde_json::json!({"num": [0, 3], "exp": 1}));
    assert_eq!(v["lambda"], serde_json::json!({"num": [1, 1], "exp": 1}));
}

#[test]
fn oracle_is_deterministic() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lquad"))
            .args(["oracle", "--suite", "refinement", "--trials", "50", "--seed", "3", "--json"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["pass"], true);
}

#[test]
fn lgroups_table() {
    let out = Command::new(env!("CARGO_BIN_EXE_lquad")).args(["lgroups", "--ring", "z"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n  L^n(Z) hyperquadratic\n0  Z_8\n1  Z_2\n2  0\n3  Z_2\n");
}
