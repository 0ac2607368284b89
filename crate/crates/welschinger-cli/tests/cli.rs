use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], table_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_welschinger"));
    cmd.args(args).env_remove("WELSCHINGER_TABLE_DIR");
    if let Some(dir) = table_dir {
        cmd.env("WELSCHINGER_TABLE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("welschinger-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn chi_prints_the_value() {
    let o = run(&["chi", "--geometry", "cp2", "--degree", "6", "--real-points", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1024\n");
    let o = run(&["chi", "--geometry", "quadric3", "--degree", "6", "--real-points", "1"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn ledger_lists_each_tree() {
    let o = run(&["chi", "--geometry", "cp2", "--degree", "8", "--real-points", "1", "--ledger"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "-280576");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.contains("projective|8|1|")));
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("PASS")).count(), 9);
}

#[test]
fn flag_errors_exit_2() {
    assert_eq!(run(&["chi", "--geometry", "cp5", "--degree", "6", "--real-points", "1"]).status.code(), Some(2));
    assert_eq!(run(&["chi", "--geometry", "cp2"]).status.code(), Some(2));
    assert_eq!(run(&["chi", "--geometry", "cp2", "--degree", "6", "--real-points", "2"]).status.code(), Some(2));
    assert_eq!(run(&["poly", "--geometry", "cp2", "--degree", "3", "--format", "yaml"]).status.code(), Some(2));
    let missing = Path::new("/nonexistent/cotangent.json").to_str().unwrap();
    assert_eq!(
        run(&["chi", "--geometry", "cp2", "--degree", "5", "--real-points", "0", "--f-table", missing]).status.code(),
        Some(2)
    );
}

#[test]
fn missing_data_exits_3_and_names_the_key() {
    let o = run(&["chi", "--geometry", "cp2", "--degree", "9", "--real-points", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("N_4^"), "{err}");
}

#[test]
fn json_output_is_stable() {
    let args = ["chi", "--geometry", "cp2", "--degree", "7", "--real-points", "2", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let c = run(&seq_args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["value"], 11776);
    assert_eq!(v["ledger"].as_array().unwrap().len(), 5);
}

#[test]
fn poly_csv_and_text() {
    let o = run(&["poly", "--geometry", "quadric2", "--degree", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "geometry,d,r,chi\nquadric2,2,1,0\nquadric2,2,3,2\nquadric2,2,5,4\nquadric2,2,7,6\n");
    let o = run(&["poly", "--geometry", "cp2", "--degree", "6", "--max-real-points", "3"]);
    assert_eq!(stdout(&o), "r=1: 1024\nr=3: 1536\n");
}

#[test]
fn trees_dump_parses() {
    let o = run(&["trees", "--geometry", "quadric2", "--degree", "4", "--real-points", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let trees = v.as_array().unwrap();
    assert!(!trees.is_empty());
    for t in trees {
        assert_eq!(t["family"], "TwoSpherical");
        assert_eq!(t["vertices"][0]["parity"], "even");
        assert!(t["assignment_count"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn derive_shows_the_chain() {
    let o = run(&["derive", "--kind", "RP2", "--beta", "e1+e2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("F^RP2_(6,0)(0, e1+e2) = 24"), "{out}");
    let o = run(&["derive", "--kind", "RP2", "--beta", "2e1", "--pairs", "1"]);
    assert_eq!(stdout(&o), "F^RP2_(3,1)(0, 2e1) = 1  [R2]\n  1 * F^RP2_(3,0)(e1, e1) = 1  [table (plain)]\n");
    let o = run(&["derive", "--kind", "RP2", "--beta", "e1+e2", "--real-points", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn frontier_lists_computable_pairs() {
    let o = run(&["frontier", "--geometry", "quadric3", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.contains("quadric3,10,1,true"));
    assert!(out.contains("quadric3,2,1,true"));
}

#[test]
fn table_dir_replaces_the_builtin_tables() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../welschinger/data/relative.json");
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data).unwrap()).unwrap();
    // drop N_4^{e+3f}(0, e1+e2), needed at (8, 1)
    doc["entries"]
        .as_array_mut()
        .unwrap()
        .retain(|e| !(e["n"] == 4 && e["a"] == 1 && e["b"] == 3 && e["alpha"] == serde_json::json!([]) && e["beta"] == serde_json::json!([1, 1])));
    let dir = scratch_dir("tables");
    std::fs::write(dir.join("relative.json"), serde_json::to_string(&doc).unwrap()).unwrap();

    let args = ["chi", "--geometry", "cp2", "--degree", "8", "--real-points", "1"];
    assert_eq!(run_env(&args, Some(&dir)).status.code(), Some(3));
    let mut rec = args.to_vec();
    rec.extend(["--engine", "recursion"]);
    assert_eq!(stdout(&run_env(&rec, Some(&dir))), "-280576\n");
    // values not touching the dropped entry are unaffected
    assert_eq!(stdout(&run_env(&["chi", "--geometry", "cp2", "--degree", "6", "--real-points", "1"], Some(&dir))), "1024\n");
    std::fs::remove_dir_all(dir).ok();
}
