use std::path::PathBuf;
use std::process::{Command, Output};

const EXAMPLE_KNOT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/example_knot.bt");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclotangle"))
        .args(args)
        .env_remove("CYCLOTANGLE_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclotangle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dims_as_json() {
    let o = run(&["--json", "dims", "--skeleton", "unknot", "--N", "1", "--max-degree", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<u64> = v["dims"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 1, 2, 3]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["dims", "--N"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let missing = run(&["quantum", "--tangle", "/nonexistent/word.bt", "--N", "2"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
    let bad = scratch("bad.bt");
    std::fs::write(&bad, "obj + ; X 1 + ;").unwrap();
    assert_eq!(run(&["quantum", "--tangle", bad.to_str().unwrap(), "--N", "2"]).status.code(), Some(1));
}

#[test]
fn quantum_value_of_the_example_knot() {
    let o = run(&["quantum", "--tangle", EXAMPLE_KNOT, "--N", "3"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "(1 - z) * nu^-4 * qlam^-1 + (z) * nu^-4 * qlam^1 + (1 - z) * nu^0 * qlam^-1 + (z) * nu^0 * qlam^1 + (-1 + z) * nu^2 * qlam^-1 + (-z) * nu^2 * qlam^1"
    );
    let m = run(&["quantum", "--tangle", EXAMPLE_KNOT, "--N", "3", "--mirror"]);
    assert!(m.status.success());
    assert_ne!(stdout(&m), stdout(&o));
}

#[test]
fn associator_files_round_trip() {
    let a = scratch("a2.txt");
    let b = scratch("a1.txt");
    let (a_s, b_s) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert!(run(&["assoc", "solve", "--N", "2", "--degree", "3", "--out", a_s]).status.success());
    let v = run(&["assoc", "verify", "--assoc", a_s]);
    assert!(v.status.success());
    assert!(stdout(&v).contains("octagon degree 3: ok"));
    assert!(run(&["assoc", "project", "--assoc", a_s, "--to", "1", "--out", b_s]).status.success());
    assert!(run(&["assoc", "verify", "--assoc", b_s]).status.success());
    assert!(std::fs::read_to_string(&b).unwrap().starts_with("associator N=1 cap=3"));
    // re-solving gives the same bytes
    let c = scratch("a2-again.txt");
    assert!(run(&["assoc", "solve", "--N", "2", "--degree", "3", "--out", c.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
    assert_eq!(run(&["assoc", "project", "--assoc", a_s, "--to", "3", "--out", b_s]).status.code(), Some(1));
}

#[test]
fn invariant_with_weights() {
    let o = run(&["--json", "invariant", "--tangle", EXAMPLE_KNOT, "--N", "2", "--degree", "2", "--weights", "sl2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sl2"].as_array().unwrap().len(), 3);
}

#[test]
fn verification_suites() {
    let m = run(&["verify", "moves", "--trials", "100"]);
    assert!(m.status.success());
    assert!(stdout(&m).contains("100/100 exact equalities"));
    assert!(run(&["verify", "relations", "--N", "1"]).status.success());
    assert!(run(&["verify", "oracle", "--link", "example_knot", "--N", "2", "--degree", "2"]).status.success());
    assert!(run(&["verify", "universality", "--skeleton", "*+", "--N", "2", "--degree", "2"]).status.success());
}
