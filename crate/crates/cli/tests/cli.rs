use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gls")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn validating_the_gkm_datum() {
    let o = gls(&["datum", "validate", &data("gkm2.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("imaginary {2}"));
    let bad = gls(&["datum", "validate", "[[2,1],[1,2]]"]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("\"status\":\"domain\""));
}

#[test]
fn lifted_entries() {
    let ex = data("gkm2.json");
    assert_eq!(stdout(&gls(&["datum", "lift", &ex, "--entry", "2,3,2,3"])).trim(), "2");
    assert_eq!(stdout(&gls(&["datum", "lift", &ex, "--entry", "2,1,2,5"])).trim(), "-4");
    assert_eq!(code(&gls(&["datum", "lift", &ex, "--entry", "1,2,2,1"])), 1);
    assert_eq!(code(&gls(&["datum", "lift", &ex, "--entry", "1,2"])), 64);
}

#[test]
fn reducing_words() {
    let o = gls(&["monoid", "reduce", "1 1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "()");
    assert_eq!(stdout(&gls(&["monoid", "reduce", "a b b c"])).trim(), "(a,c)");
    let a2 = data("a2.json");
    let left = stdout(&gls(&["monoid", "reduce", "1 2 1", "--datum", &a2]));
    assert_eq!(left, stdout(&gls(&["monoid", "reduce", "2 1 2", "--datum", &a2])));
    assert_eq!(stdout(&gls(&["monoid", "reduce", "2 2", "--datum", &data("gkm2.json")])).trim(), "(2,2)");
}

#[test]
fn bruhat_and_action() {
    let a2 = data("a2.json");
    assert_eq!(stdout(&gls(&["monoid", "leq", "1", "1 2 1", "--datum", &a2])).trim(), "true");
    assert_eq!(stdout(&gls(&["monoid", "leq", "1 2", "2 1", "--datum", &a2])).trim(), "false");
    let o = json(&gls(&["monoid", "act", "1", "1,0", "--datum", &a2]));
    assert_eq!(o["evals"], serde_json::json!(["-1", "1"]));
}

#[test]
fn embedding_a_word() {
    let ex = data("gkm2.json");
    let o = gls(&["embed", "word", &ex, "2 2 1 2 2 2 1 1 2 2"]);
    assert_eq!(stdout(&o).trim(), "(2,7) (2,6) (1,1) (2,5) (2,4) (2,3) (1,1) (1,1) (2,2) (2,1)");
    let p = gls(&["embed", "path", &ex, "1,1", "2 2 1 2 2 2 1 1 2 2", "--check-h"]);
    assert_eq!(code(&p), 0);
    let v = json(&p);
    assert_eq!(v["probe"]["checked"], 10);
    assert!(v["downstairs"].is_array() && v["lifted"].is_array());
}

/// Every edge `u -i-> v` lowers the weight by exactly `α_i`.
fn check_dot_weights(dot: &str) -> (usize, usize) {
    let mut weights: BTreeMap<String, (String, Vec<i64>)> = BTreeMap::new();
    let mut edges = 0;
    for line in dot.lines().map(str::trim) {
        let Some((head, label)) = line.split_once(" [label=\"") else { continue };
        let label = label.trim_end_matches("\"];");
        if let Some((u, v)) = head.split_once(" -> ") {
            let i: usize = label.parse::<usize>().unwrap() - 1;
            let (bu, ou) = &weights[u];
            let (bv, ov) = &weights[v];
            assert_eq!(bu, bv);
            for (j, (a, b)) in ou.iter().zip(ov).enumerate() {
                assert_eq!(*b - *a, if j == i { 1 } else { 0 }, "edge {u} -> {v}");
            }
            edges += 1;
        } else {
            let inner = label.trim_start_matches('[').trim_end_matches(']');
            let (base, offset) = inner.split_once('|').unwrap();
            let offset = offset.split(',').map(|x| x.parse().unwrap()).collect();
            weights.insert(head.to_string(), (base.to_string(), offset));
        }
    }
    (weights.len(), edges)
}

#[test]
fn generating_a_dot_graph_with_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gkm2.dot");
    let out_s = out.to_string_lossy().into_owned();
    let o = gls(&["crystal", "gen", &data("gkm2.json"), "1,1", "--depth", "4", "--out", "dot", "-o", &out_s, "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dot = std::fs::read_to_string(&out).unwrap();
    assert_eq!(dot, include_str!("snapshots/gkm2_depth4.dot"));
    assert_eq!(check_dot_weights(&dot), (19, 19));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("gkm2.dot.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["exit"], 0);
    assert_eq!(manifest["seed"], 0);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
    assert_eq!(manifest["output"]["bytes"], dot.len());
}

#[test]
fn outputs_do_not_depend_on_the_thread_count() {
    let ex = data("gkm2.json");
    let one = gls(&["--threads", "1", "crystal", "gen", &ex, "2,1", "--depth", "5", "--out", "jsonl"]);
    let four = gls(&["--threads", "4", "crystal", "gen", &ex, "2,1", "--depth", "5", "--out", "jsonl"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn rerunning_from_a_manifest_reproduces_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let manifest = dir.path().join("run.json");
    let o = gls(&[
        "--seed", "7", "-o", &out.to_string_lossy(), "--manifest", &manifest.to_string_lossy(),
        "suite", "embedding", &data("gkm2.json"), "--samples", "50",
    ]);
    assert_eq!(code(&o), 0);
    let first = std::fs::read(&out).unwrap();
    std::fs::remove_file(&out).unwrap();
    let r = gls(&["rerun", &manifest.to_string_lossy()]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let mut m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    m["output"]["sha256"] = "0".repeat(64).into();
    std::fs::write(&manifest, m.to_string()).unwrap();
    assert_eq!(code(&gls(&["rerun", &manifest.to_string_lossy()])), 1);
}

#[test]
fn character_of_a_generated_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a2.jsonl");
    let o = gls(&["crystal", "gen", &data("a2.json"), "1,1", "--depth", "10", "--out", "jsonl", "-o", &out.to_string_lossy()]);
    assert_eq!(code(&o), 0);
    let c = json(&gls(&["crystal", "char", &out.to_string_lossy()]));
    assert_eq!(c["total"], 8);
    let mults: Vec<u64> = c["counts"].as_array().unwrap().iter().map(|x| x["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mults.iter().sum::<u64>(), 8);
    assert_eq!(mults.iter().filter(|&&m| m == 2).count(), 1);
}

#[test]
fn tensor_and_branching_rules() {
    let a2 = data("a2.json");
    let t = gls(&["crystal", "tensor", &a2, "1,0", "1,0", "--depth", "6", "--verify"]);
    assert_eq!(code(&t), 0);
    let t = json(&t);
    let words: Vec<&str> = t["summands"].as_array().unwrap().iter().map(|s| s["fword"].as_str().unwrap()).collect();
    assert_eq!(words, ["", "1"]);
    let b = gls(&["crystal", "branch", &a2, "1,1", "--subset", "1", "--depth", "6", "--verify"]);
    assert_eq!(code(&b), 0);
    assert_eq!(json(&b)["summands"].as_array().unwrap().len(), 4);
    let g = gls(&["crystal", "tensor", &data("gkm2.json"), "1,1", "0,1", "--depth", "4", "--verify"]);
    assert_eq!(code(&g), 0, "{}", String::from_utf8_lossy(&g.stderr));
}

#[test]
fn standardness_of_a_concatenation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let twice_lowered = r#"[{"duration":"1","slope":{"base_evals":["2","0"],"offset":["2","0"]}}]"#;
    std::fs::write(&path, twice_lowered).unwrap();
    let o = gls(&["crystal", "standard", &data("a2.json"), "1,0;1,0", &path.to_string_lossy()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["standard"], true);
    assert_eq!(v["raising_word"], "1 1");
    assert!(v["defining_chain"].is_array());

    let off = r#"[{"duration":"1","slope":{"base_evals":["1","0"],"offset":["0","5"]}}]"#;
    std::fs::write(&path, off).unwrap();
    assert_eq!(code(&gls(&["crystal", "standard", &data("a2.json"), "1,0", &path.to_string_lossy()])), 1);
}

#[test]
fn suites_and_exit_classes() {
    let o = gls(&["suite", "operators", "[[2]]"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["failure_count"], 0);
    assert_eq!(v["checks"]["membership"], 3400);

    let bug = gls(&["suite", "monoid", &data("gkm2.json"), "--inject-bug"]);
    assert_eq!(code(&bug), 1);
    assert!(json(&bug)["failure_count"].as_u64().unwrap() > 0);
    assert!(String::from_utf8_lossy(&bug.stderr).contains("counterexamples"));

    assert_eq!(code(&gls(&["--bounds", "nodes=5", "crystal", "gen", &data("gkm2.json"), "1,1", "--depth", "6"])), 2);
    assert_eq!(code(&gls(&["--bounds", "height=0", "monoid", "reduce", "1"])), 64);
    assert_eq!(code(&gls(&["suite", "nonsense", "[[2]]"])), 64);
    assert_eq!(code(&gls(&["frobnicate"])), 64);
    assert_eq!(code(&gls(&["--help"])), 0);
}
