use std::path::PathBuf;
use std::process::{Command, Output};

use loopbraid::builtin::ising;
use loopbraid::io::{category_to_string, from_data, to_data};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopbraid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loopbraid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_builtins() {
    for name in ["trivial", "ising", "ty"] {
        let o = run(&["verify", "--builtin", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
    let o = run(&[
        "verify",
        "--builtin",
        "ty",
        "--ty-k",
        "2",
        "--ty-sign",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_detects_negated_f_entry() {
    let mut data = to_data(&ising());
    let e = data
        .f
        .iter_mut()
        .find(|e| {
            [&e.a, &e.b, &e.c, &e.d].iter().all(|s| *s == "sigma") && e.e == "1" && e.f == "1"
        })
        .unwrap();
    e.value = [-e.value[0], -e.value[1]];
    let path = scratch("broken.cat");
    std::fs::write(&path, category_to_string(&from_data(&data).unwrap())).unwrap();
    let o = run(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("pentagon: FAIL"), "{out}");
    assert!(out.contains("pentagon (sigma,sigma,sigma,sigma"), "{out}");
}

#[test]
fn export_then_load_round_trips() {
    let a = scratch("ising_a.cat");
    let o = run(&[
        "export-builtin",
        "--builtin",
        "ising",
        "--output",
        a.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, category_to_string(&ising()));
    let o = run(&["verify", "--file", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn rep_ising_passes() {
    let o = run(&[
        "rep",
        "--builtin",
        "ising",
        "-x",
        "sigma",
        "-y",
        "sigma",
        "-z",
        "vac",
        "-n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("has dimension 4"));
    assert!(out.contains("double braiding of x⊗y: trivial"));
    assert!(out.contains("psi=fermion"));
}

#[test]
fn rep_negative_control_fails() {
    let o = run(&[
        "rep",
        "--builtin",
        "ising",
        "-x",
        "sigma",
        "-y",
        "vac",
        "-z",
        "sigma",
        "-n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out
        .lines()
        .any(|l| l.trim_start().starts_with("S2") && l.contains("FAIL")));
    assert!(out.contains("nontrivial"));
}

#[test]
fn rep_trivial_is_identity() {
    let o = run(&["rep", "--builtin", "trivial", "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x1\n  +1.000000+0.000000i\n"));
}

#[test]
fn rep_empty_space_warns() {
    let o = run(&[
        "rep",
        "--builtin",
        "ty",
        "--ty-k",
        "2",
        "-x",
        "m",
        "-y",
        "m",
        "-z",
        "m",
        "-n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("zero-dimensional"));
}

#[test]
fn eval_words() {
    let base = [
        "eval",
        "--builtin",
        "ising",
        "-x",
        "sigma",
        "-y",
        "sigma",
        "-n",
        "2",
    ];
    let identity = "matrix (2×2)\n  +1.000000+0.000000i  +0.000000+0.000000i\n  +0.000000+0.000000i  +1.000000+0.000000i\n";
    for word in ["s1 s1", ""] {
        let mut args = base.to_vec();
        args.push(word);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(identity), "{word:?}: {}", stdout(&o));
    }
    let o = run(&[
        "eval",
        "--builtin",
        "ising",
        "-x",
        "sigma",
        "-y",
        "sigma",
        "-n",
        "3",
        "x9",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("out of range"));
    let o = run(&["eval", "--builtin", "ising", "-n", "3", "x1 q2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("byte 3"));
}

#[test]
fn oracle_passes() {
    for args in [
        vec![
            "oracle",
            "--builtin",
            "ising",
            "-x",
            "sigma",
            "-y",
            "sigma",
            "-z",
            "vac",
            "-n",
            "2",
        ],
        vec![
            "oracle",
            "--builtin",
            "ising",
            "-x",
            "sigma",
            "-y",
            "sigma",
            "-z",
            "psi",
            "-n",
            "3",
        ],
        vec!["oracle", "--builtin", "trivial", "-n", "3"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("result: pass"));
    }
}

#[test]
fn structured_output_is_deterministic() {
    let args = [
        "rep",
        "--builtin",
        "ty",
        "--ty-k",
        "2",
        "-x",
        "m",
        "-y",
        "m",
        "-z",
        "00",
        "-n",
        "3",
        "--format",
        "structured",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("\"dimension\": 16"));
    assert!(text.contains("1.0000000000000000e0") || text.contains("7.0710678118654757e-1"));
}

#[test]
fn dims_listing() {
    let o = run(&[
        "dims",
        "--builtin",
        "ising",
        "-x",
        "sigma",
        "-y",
        "sigma",
        "-z",
        "psi",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for (n, d) in [(1, 1), (2, 2), (6, 32)] {
        assert!(
            out.contains(&format!("\"n\": {n},\n      \"dim\": {d}")),
            "{out}"
        );
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["rep", "--builtin", "ising", "-x", "tau"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--file", "/nonexistent/cat.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(
        run(&["rep", "--builtin", "ising", "-n", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--builtin", "ising", "--tol", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--builtin", "ty", "--ty-k", "4"])
            .status
            .code(),
        Some(2)
    );
}
