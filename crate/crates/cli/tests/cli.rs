use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tateindex")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--json", "-"]);
    let o = run(&a);
    assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn relindex_of_nested_lattices() {
    let v = json(&["lattice", "relindex", "t^2, 0; 0, t", "1, 0; 0, 1"]);
    assert_eq!(v["rel_index"], 3);
    assert_eq!(v["sup_over_l0"], serde_json::json!([1, 2]));
    assert_eq!(v["sup"]["basis"], "1, 0; 0, 1");
}

#[test]
fn leq_and_quotient() {
    assert_eq!(json(&["lattice", "leq", "t, 0; 0, 1", "1, 0; 0, 1"])["leq"], true);
    assert_eq!(json(&["lattice", "leq", "t^-1, 0; 0, 1", "1, 0; 0, 1"])["leq"], false);
    assert_eq!(json(&["lattice", "quotient", "t, 0; 0, t^2", "1, 0; 0, 1"])["length"], 3);
}

#[test]
fn padic_lattices() {
    let v = json(&["--ring", "padic", "--p", "3", "lattice", "relindex", "9, 0; 0, 3", "1, 0; 0, 1"]);
    assert_eq!(v["rel_index"], 3);
}

#[test]
fn group_index() {
    let v = json(&["index", "group", "t, 0; 0, 1", "t^-2, 1; 0, 1"]);
    assert_eq!(v["element_index"], serde_json::json!([1, -2]));
    assert_eq!(v["tuple_index"], serde_json::json!([-1, 2]));
}

#[test]
fn generation_is_reproducible() {
    for kind in ["lattice", "chain", "group-tuple", "poset", "diagram"] {
        let a = run(&["generate", kind, "--seed", "9"]);
        let b = run(&["generate", kind, "--seed", "9"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{kind}");
    }
    let a = run(&["generate", "lattice", "--seed", "1"]);
    let b = run(&["generate", "lattice", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn generated_diagram_feeds_diagram_commands() {
    let dir = std::env::temp_dir().join(format!("tateindex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.txt");
    let g = run(&["generate", "diagram", "--seed", "4"]);
    std::fs::write(&path, &g.stdout).unwrap();
    let p = path.to_str().unwrap();
    let pre = json(&["diagram", "preindex", p]);
    let rig = json(&["diagram", "rigidity", p]);
    assert_eq!(pre["pre_index"], rig["pre_index"]);
    assert_eq!(rig["trees_agree"], true);
    let split = json(&["diagram", "split", p]);
    assert!(!split["splittings"].as_array().unwrap().is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn contraction_file_and_rejection() {
    let dir = std::env::temp_dir().join(format!("tateindex-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(&good, "source: 4; 0<1, 1<3, 2<3\nbase: 0,1\ntarget: 3; 0<2, 1<2\nphi: 0,0,1,2\n").unwrap();
    let v = json(&["diagram", "lemma327", good.to_str().unwrap(), "--cases", "10"]);
    assert_eq!(v["accepted"], true);
    assert_eq!(v["failures"], 0);
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "source: 2; 0<1\nbase: 0,1\ntarget: 1;\nphi: 0,0\n").unwrap();
    let o = run(&["diagram", "lemma327", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn posets() {
    let v = json(&["poset", "gen", "B", "2"]);
    assert_eq!(v["poset"], "6; 0<3, 1<3, 1<4, 2<4, 3<5, 4<5\nbase: 0,1,2");
    assert!(!run(&["poset", "gen", "Q", "2"]).status.success());
}

#[test]
fn appendix_commands() {
    assert_eq!(json(&["appendix", "lemma-pre", "--cat", "cyclic:2", "--degree", "3"])["holds"], true);
    assert_eq!(json(&["appendix", "segal", "--cat", "sym:3", "--degree", "3"])["segal"], true);
    assert_eq!(json(&["appendix", "coskeletal", "--cat", "ordinal:1", "--k", "0"])["coskeletal"], false);
}

#[test]
fn empty_check_is_green() {
    let v = json(&["check", "all", "--cases", "0"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["cases"], 0);
    assert_eq!(v["rng"]["algorithm"], "ChaCha8");
}

#[test]
fn check_reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        for p in v["parts"].as_array_mut().unwrap() {
            p.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    let a = strip(json(&["check", "cocycle", "--cases", "10", "--seed", "7"]));
    let b = strip(json(&["check", "cocycle", "--cases", "10", "--seed", "7"]));
    assert_eq!(a, b);
    assert_eq!(a["failures"], serde_json::json!([]));
    assert_eq!(a["config"]["seed"], 7);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["lattice", "leq", "t, 0", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "oracle", "--cases", "5"]).status.code(), Some(0));
}

#[test]
fn json_report_file() {
    let path = std::env::temp_dir().join(format!("tateindex-r-{}.json", std::process::id()));
    let o = run(&["check", "oracle", "--cases", "3", "--json", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "oracle");
    assert_eq!(v["schema_version"], 1);
    std::fs::remove_file(&path).ok();
}
