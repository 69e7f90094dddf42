use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mckay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(args)
        .env_remove("MCKAY_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = mckay(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn points(polytope: &Value) -> Vec<Vec<String>> {
    polytope["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| {
            v["point"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().to_string())
                .collect()
        })
        .collect()
}

#[test]
fn quiver_has_fifteen_arrows() {
    let q = json(&["quiver", "--action", "5:1,2,3"]);
    let arrows = q["arrows"].as_array().unwrap();
    assert_eq!(arrows.len(), 15);
    for a in arrows {
        let (tail, head, kind) = (
            a["tail"].as_i64().unwrap(),
            a["head"].as_i64().unwrap(),
            a["type"].as_i64().unwrap(),
        );
        assert_eq!((tail - [1, 2, 3][kind as usize - 1]).rem_euclid(5), head);
    }
}

#[test]
fn non_free_action_exits_two() {
    let out = mckay(&["quiver", "--action", "4:1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_inputs_exit_two() {
    for args in [
        &["quiver", "--action", "5:1,x"][..],
        &["polytope", "--action", "5:1,2,3", "--zeta", "1,1,1,1,1"],
        &["polytope", "--action", "5:1,2,3", "--zeta", "1,-1"],
        &["check", "--action", "2:1,1", "--all-zeta", "3..-3"],
        &["check", "--action", "2:1,1"],
        &[
            "polytope",
            "--action",
            "4:1,1,1,1",
            "--zeta",
            "1,-1,0,0",
            "--off",
            "/dev/null",
        ],
    ] {
        assert_eq!(mckay(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(["quiver", "--action", "3:1,1,1"])
        .env("MCKAY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_output() {
    let out = mckay(&["quiver", "--action", "3:1,1,1", "--format", "dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 9);
}

#[test]
fn ic_tree_counts() {
    let count = |args: &[&str]| json(args).as_array().unwrap().len();
    assert_eq!(count(&["ic-trees", "--action", "5:1,2,3", "--reduce"]), 55);
    assert_eq!(count(&["ic-trees", "--action", "3:1,1,1", "--reduce"]), 3);
    assert_eq!(
        count(&[
            "ic-trees",
            "--action",
            "5:1,2,3",
            "--singular-only",
            "--reduce"
        ]),
        7
    );
    assert_eq!(count(&["ic-trees", "--action", "5:1,2,3"]), 275);
}

#[test]
fn ic_tree_entries_have_catalog_fields() {
    let trees = json(&["ic-trees", "--action", "3:1,1,1", "--reduce"]);
    for t in trees.as_array().unwrap() {
        assert_eq!(t["treeArrows"].as_array().unwrap().len(), 2);
        for key in [
            "closureArrows",
            "admissibleConeForms",
            "tangentConeGenerators",
            "orbitSize",
            "class",
        ] {
            assert!(!t[key].is_null(), "{key}");
        }
    }
}

#[test]
fn polytope_contains_the_singular_vertex() {
    let p = json(&["polytope", "--action", "5:1,2,3", "--zeta", "-1,-1,-1,-1,4"]);
    assert!(points(&p).contains(&vec!["1/1".into(), "3/1".into(), "1/1".into()]));
}

#[test]
fn zero_zeta_gives_the_apex() {
    let out = mckay(&["polytope", "--action", "5:1,2,3", "--zeta", "0,0,0,0,0"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not generic"));
    let p: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(points(&p), vec![vec!["0/1".to_string(); 3]]);
}

#[test]
fn eleven_vertices_for_one_eleventh() {
    let p = json(&[
        "polytope",
        "--action",
        "11:1,4,6",
        "--zeta",
        "1,2,3,4,5,6,7,8,9,10,-55",
    ]);
    assert_eq!(points(&p).len(), 11);
}

#[test]
fn rational_zeta_scales() {
    let a = json(&["classify", "--action", "5:1,2,3", "--zeta", "9,8,-3,-2,-12"]);
    let b = json(&[
        "classify",
        "--action",
        "5:1,2,3",
        "--zeta",
        "9/2,4,-3/2,-1,-6",
    ]);
    assert_eq!(a["counts"], b["counts"]);
    assert_eq!(a["eulerNumber"], 9);
}

#[test]
fn classify_finds_one_quadric() {
    let c = json(&["classify", "--action", "5:1,2,3", "--zeta", "-1,-1,-1,-1,4"]);
    assert_eq!(c["counts"]["quadric-cone"], 1);
    let total: u64 = c["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(c["counts"]["smooth"].as_u64().unwrap(), total - 1);
}

#[test]
fn crepancy_verdicts() {
    let c = json(&["crepancy", "--action", "3:1,1,1", "--zeta", "1,2,-3"]);
    assert_eq!(c["crepant"], true);
    let c = json(&[
        "crepancy",
        "--action",
        "6:1,2,3",
        "--allow-non-free",
        "--zeta",
        "1,2,4,8,16,-31",
    ]);
    assert_eq!(c["crepant"], true);
    assert_eq!(c["eulerNumber"], 6);
}

#[test]
fn fan_of_one_third() {
    let f = json(&["fan", "--action", "3:1,1,1", "--zeta", "1,2,-3"]);
    assert_eq!(f["fan"]["rays"].as_array().unwrap().len(), 4);
    assert_eq!(f["fan"]["maximalCones"].as_array().unwrap().len(), 3);
}

#[test]
fn check_single_zeta() {
    let c = json(&["check", "--action", "5:1,2,3", "--zeta", "9,8,-3,-2,-12"]);
    assert_eq!(c["passed"], true);
    assert!(c["zeta"][0]["comparisons"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["ok"] == true));
}

#[test]
fn check_small_sweep() {
    let c = json(&["check", "--action", "2:1,1", "--all-zeta", "-3..3"]);
    assert_eq!(c["sweep"]["grid_points"], 7);
    assert_eq!(c["passed"], true);
}

#[test]
fn check_exactness() {
    let c = json(&["check", "--exactness", "--action", "7:1,2,4"]);
    let e = &c["exactness"];
    assert_eq!(e["lambda2_rank"], 12);
    assert_eq!(e["cokernel_order"], "7");
    assert_eq!(e["passed"], true);
}

#[test]
fn chambers_from_cells() {
    let c = json(&["chambers", "--action", "3:1,1,1", "--cells"]);
    assert_eq!(c["cells"], 6);
    assert!(c["chambers"]
        .as_array()
        .unwrap()
        .iter()
        .all(|ch| ch["vertices"] == 3));
}

#[test]
fn output_file_and_off_export() {
    let dir = scratch("polytope");
    let json_path = dir.join("p.json");
    let off_path = dir.join("p.off");
    let out = mckay(&[
        "polytope",
        "--action",
        "5:1,2,3",
        "--zeta",
        "9,8,-3,-2,-12",
        "--output",
        json_path.to_str().unwrap(),
        "--off",
        off_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let p: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(points(&p).len(), 9);
    let off = std::fs::read_to_string(&off_path).unwrap();
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let counts: Vec<usize> = lines
        .next()
        .unwrap()
        .split(' ')
        .map(|x| x.parse().unwrap())
        .collect();
    // Euler's formula for the truncated polytope.
    assert_eq!(counts[0] + counts[1], counts[2] + 2);
    assert_eq!(off.lines().count(), 2 + counts[0] + counts[1]);
}

#[test]
fn export_writes_every_file() {
    let dir = scratch("export");
    let out = mckay(&[
        "export",
        "--action",
        "3:1,1,1",
        "--zeta",
        "1,2,-3",
        "--dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for name in [
        "quiver.json",
        "quiver.dot",
        "polytope.json",
        "fan.json",
        "classify.json",
        "crepancy.json",
        "polytope.off",
    ] {
        assert!(dir.join(name).is_file(), "{name}");
    }
}

#[test]
fn product_action() {
    let q = json(&["quiver", "--action", "2:1,1", "--action", "3:1,2"]);
    assert_eq!(q["arrows"].as_array().unwrap().len(), 24);
}
