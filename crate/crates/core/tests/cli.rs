use std::path::PathBuf;

use diaplan::cli::run_cli;

fn program(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name).display().to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(std::iter::once("diaplan").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_exit_codes() {
    assert_eq!(cli(&["check", &program("list.dp"), &program("coloring.dp")]).0, 0);
    assert_eq!(cli(&["check", "/definitely/not/here.dp"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.dp");
    std::fs::write(&broken, "pred p(0) { rule { pattern { call p(); var X(a); var X(b); } => { } } otherwise fail; }").unwrap();
    let (code, _, err) = cli(&["check", broken.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("non-linear pattern"), "{err}");
    let bad = dir.path().join("bad.dp");
    std::fs::write(&bad, "graph g { edge x(a b); }").unwrap();
    assert_eq!(cli(&["check", bad.to_str().unwrap()]).0, 2);
}

#[test]
fn run_exit_codes() {
    let list = program("list.dp");
    let (code, out, _) = cli(&["run", &program("coloring.dp"), "--input", "square4", "--goal", "coloring"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph result {"));
    assert_eq!(cli(&["run", &list, "--input", "empty", "--goal", "remove"]).0, 3);
    let budget = ["run", &list, "--input", "pending", "--goal", "normalize", "--args", "@r", "--max-steps", "1"];
    assert_eq!(cli(&budget).0, 5);
    let dir = tempfile::tempdir().unwrap();
    let raising = dir.path().join("raise.dp");
    std::fs::write(&raising, "pred boom(0) { otherwise raise; } graph main { call boom(); }").unwrap();
    assert_eq!(cli(&["run", raising.to_str().unwrap()]).0, 4);
    assert_eq!(cli(&["run", &list, "--max-steps", "0"]).0, 2);
    assert_eq!(cli(&["run", &list, "--input", "nothing"]).0, 2);
}

#[test]
fn failing_check_blocks_run_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("untyped.dp");
    std::fs::write(&path, "frame Box(0) : Nothing; graph main { frame Box() = { }; }").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(cli(&["run", p]).0, 1);
    assert_eq!(cli(&["run", p, "--no-typecheck"]).0, 0);
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for i in 0..2 {
        let trace = dir.path().join(format!("t{i}"));
        let (code, out, _) = cli(&[
            "run",
            "--program",
            &program("coloring.dp"),
            "--input",
            "square4",
            "--goal",
            "coloring",
            "--trace",
            trace.to_str().unwrap(),
            "--format",
            "dot",
        ]);
        assert_eq!(code, 0);
        seen.push((out, std::fs::read_to_string(trace).unwrap()));
    }
    assert_eq!(seen[0], seen[1]);
    assert!(!seen[0].1.is_empty());
}
