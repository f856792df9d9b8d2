use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compcodes"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// params, encode, compose, corrupt, decode through files; returns decode
/// stdout and exit code.
fn pipeline(dir: &Path, param_args: &[&str], message: &str, budget: usize, seed: u64) -> (String, i32) {
    let params = dir.join("params.toml");
    let code = dir.join("code.txt");
    let x = dir.join("x.txt");
    let y = dir.join("y.txt");
    let plan = dir.join("plan.txt");
    let mut args = vec!["params"];
    args.extend_from_slice(param_args);
    args.extend(["-o", p(&params)]);
    assert!(run(&args).status.success());
    let o = run(&["encode", "-p", p(&params), "-m", message, "-o", p(&code)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(run(&["compose", "-i", p(&code), "-o", p(&x)]).status.success());
    let (b, s) = (budget.to_string(), seed.to_string());
    let o = run(&["corrupt", "-i", p(&x), "-o", p(&y), "-b", &b, "-s", &s, "--plan-out", p(&plan)]);
    assert!(o.status.success());
    let o = run(&["decode", "-p", p(&params), "-i", p(&y)]);
    (stdout(&o), o.status.code().unwrap())
}

#[test]
fn c3_params_report() {
    let o = run(&["params", "--scheme", "c3", "--n1", "30", "--p", "31", "--n2", "63", "--t", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("n = 156\n"));
    assert!(text.contains("= 51 > 2t*ceil(log2 p) = 20 [ok]"));
    assert!(text.contains("2t - 1 = 3 <= 2^ceil(m/2) + 1 = 9 [ok]"));
}

#[test]
fn invalid_params_exit_one() {
    let o = run(&["params", "--scheme", "c3", "--n1", "30", "--p", "31", "--n2", "63", "--t", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[params]"));
    let o = run(&["params", "--scheme", "c7"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn pipelines_reproduce_messages() {
    let cases: [(&[&str], &str, usize); 6] = [
        (&["--scheme", "c1", "--n", "4", "--p", "5", "--t", "1"], "0000", 1),
        (&["--scheme", "c2", "--n1", "4", "--p", "5", "--t", "1"], "4,2", 1),
        (&["--scheme", "c3", "--n1", "30", "--p", "31", "--n2", "63", "--t", "2"], &"1011".repeat(7), 2),
        (&["--scheme", "c4", "--n2", "15", "--t", "1"], "110010", 1),
        (&["--scheme", "multi", "--h", "2", "--k", "6"], "101010 001011", 0),
        (
            &["--scheme", "multi", "--h", "2", "--k", "31", "--t", "1", "--good-t", "6"],
            "110011 110011",
            1,
        ),
    ];
    for (args, msg, budget) in cases {
        for seed in [1u64, 2, 3] {
            let dir = tempfile::tempdir().unwrap();
            let (out, code) = pipeline(dir.path(), args, msg, budget, seed);
            assert_eq!(code, 0, "{args:?} seed {seed}: {out}");
            assert!(out.starts_with("verdict=recovered\n"));
            assert!(out.contains(&format!("message={msg}\n")), "{out}");
            assert!(out.contains("consumed="));
        }
    }
}

#[test]
fn corrupt_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.txt");
    fs::write(&code, "0010111\n").unwrap();
    let x = dir.path().join("x.txt");
    assert!(run(&["compose", "-i", p(&code), "-o", p(&x)]).status.success());
    let a = run(&["corrupt", "-i", p(&x), "-b", "2", "-s", "42"]);
    let b = run(&["corrupt", "-i", p(&x), "-b", "2", "-s", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    assert!(String::from_utf8_lossy(&a.stderr).starts_with("# seed=42 budget=2\n"));

    // replaying the recorded plan gives the same multiset
    let plan = dir.path().join("plan.txt");
    fs::write(&plan, &a.stderr).unwrap();
    let c = run(&["corrupt", "-i", p(&x), "--plan", p(&plan)]);
    assert_eq!(c.stdout, a.stdout);
}

#[test]
fn decode_failure_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.txt");
    fs::write(&y, "n=5\n").unwrap();
    let o = run(&["decode", "--scheme", "c4", "--n2", "15", "--t", "1", "-i", p(&y)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("verdict=failed\n"));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[decode]"));

    // every group emptied: decodes to a string, which verification rejects
    fs::write(&y, "n=23\n").unwrap();
    let o = run(&["decode", "--scheme", "c4", "--n2", "15", "--t", "1", "-i", p(&y)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("verdict=detected-mismatch\n"));
}

#[test]
fn verify_c2_exhaustive() {
    let o = run(&["verify", "--scheme", "c2", "--n1", "4", "--p", "5", "--t", "1", "--exhaustive"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let total = text.lines().find_map(|l| l.strip_prefix("total=")).unwrap();
    assert!(text.contains(&format!("recovered={total}\n")));
    assert!(text.contains("silent_mismatch=0\n"));
}

#[test]
fn verify_beyond_budget_reports_and_fails() {
    let o = run(&[
        "verify", "--scheme", "c4", "--n2", "15", "--t", "1", "--messages", "4", "--trials", "200", "-b", "6", "-s", "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("first_failure="));
}

#[test]
fn outputs_are_byte_identical_on_rerun() {
    let args = ["verify", "--scheme", "c4", "--n2", "15", "--t", "1", "--messages", "5", "--trials", "50", "-s", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let enc = ["encode", "--scheme", "c4", "--n2", "15", "--t", "1", "-m", "000111"];
    assert_eq!(run(&enc).stdout, run(&enc).stdout);
}
