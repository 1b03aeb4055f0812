use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphyps"))
}

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = bin()
        .args(args)
        .env_remove("GRAPHYPS_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    let mut pipe = child.stdin.take().unwrap();
    if let Some(data) = stdin {
        pipe.write_all(data).unwrap();
    }
    drop(pipe);
    child.wait_with_output().expect("wait")
}

fn ok(args: &[&str], stdin: Option<&[u8]>) -> Vec<u8> {
    let out = run(args, stdin);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn family(args: &[&str]) -> Vec<u8> {
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    ok(&full, None)
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn wheel_pipeline_is_primitive() {
    let g = family(&["ws", "3"]);
    let out = ok(&["pld", "-"], Some(&g));
    assert_eq!(
        String::from_utf8(out).unwrap().trim(),
        r#"{"pld":true,"witness":null}"#
    );
}

#[test]
fn pld_reports_witness() {
    let g = family(&["ws", "4"]);
    let mut v = json(&g);
    // an extra parallel edge breaks log divergence of the whole graph
    let first = v["edges"][0].clone();
    v["edges"].as_array_mut().unwrap().push(first);
    let out = json(&ok(&["pld", "-"], Some(v.to_string().as_bytes())));
    assert_eq!(out["pld"], false);
    assert!(out["witness"].is_object());
}

#[test]
fn psi_det_and_trees_agree_bytewise() {
    let g = family(&["zz", "5"]);
    let det = ok(&["psi", "-", "--det"], Some(&g));
    let trees = ok(&["psi", "-", "--trees"], Some(&g));
    let shuffled = ok(&["psi", "-", "--basis-seed", "9"], Some(&g));
    assert_eq!(det, trees);
    assert_eq!(det, shuffled);
    let v = json(&det);
    assert_eq!(v["vars"], 10);
    assert_eq!(v["terms"].as_array().unwrap().len(), 130);
}

#[test]
fn named_coordinates_only_for_drawn_graphs() {
    let drawn = family(&["zz5-drawn"]);
    let v = json(&ok(&["psi", "-", "--paper-coords"], Some(&drawn)));
    assert_eq!(v["names"][0], "A0");
    let plain = family(&["ws", "3"]);
    let out = run(&["psi", "-", "--paper-coords"], Some(&plain));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_four_loops() {
    let v = json(&ok(&["classify", "--loops", "4"], None));
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0]["label"], "WS4");
}

#[test]
fn glue_two_wheels() {
    let dir = std::env::temp_dir().join(format!("graphyps-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ws3.json");
    std::fs::write(&path, family(&["ws", "3"])).unwrap();
    let p = path.to_str().unwrap();
    let glued = ok(&["glue", p, "3", p, "3"], None);
    let betti = json(&ok(&["betti", "-"], Some(&glued)));
    assert_eq!(betti["betti"], 5);
    assert_eq!(betti["edges"], 10);
    let pld = json(&ok(&["pld", "-"], Some(&glued)));
    assert_eq!(pld["pld"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(run(&["count", "-"], None).status.code(), Some(2));
    let triangle = br#"{"vertices":3,"edges":[[0,1],[1,2],[2,0]]}"#;
    let refused = run(
        &["period", "-", "--samples", "10", "--seed", "1"],
        Some(triangle),
    );
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("diverges"));
    let bad_q = run(&["count", "-", "--q", "4"], Some(triangle));
    assert_eq!(bad_q.status.code(), Some(1));
    let garbage = run(&["betti", "-"], Some(b"{\"vertices\": 2}"));
    assert_eq!(garbage.status.code(), Some(1));
}

#[test]
fn count_with_fit() {
    let g = family(&["ws", "3"]);
    let v = json(&ok(
        &[
            "count",
            "-",
            "--q",
            "2,3,5,7,11",
            "--fit",
            "--holdout",
            "13",
        ],
        Some(&g),
    ));
    assert_eq!(v["fit"]["integral"], true);
    assert_eq!(v["holdout"]["valid"], true);
    assert_eq!(v["records"][0]["projective_count"], 35);
    assert!(v["records"][0].get("wall_time_secs").is_none());
}

#[test]
fn selftest_passes() {
    let v = json(&ok(
        &[
            "identities",
            "selftest",
            "--sizes",
            "2..4",
            "--trials",
            "3",
            "--seed",
            "5",
        ],
        None,
    ));
    for t in v["tallies"].as_array().unwrap() {
        assert_eq!(t["failed"], 0, "{t}");
    }
}

/// Every subcommand twice with identical inputs: identical bytes.
#[test]
fn byte_stable_across_runs() {
    let ws3 = family(&["ws", "3"]);
    let zz5 = family(&["zz", "5"]);
    let dir = std::env::temp_dir().join(format!("graphyps-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ws3.json");
    std::fs::write(&path, &ws3).unwrap();
    let p = path.to_str().unwrap();
    let cases: Vec<(Vec<&str>, Option<&[u8]>)> = vec![
        (vec!["family", "gzz", "3", "2", "3"], None),
        (vec!["betti", "-"], Some(&zz5)),
        (vec!["psi", "-"], Some(&zz5)),
        (vec!["psi", "-", "--trees"], Some(&zz5)),
        (vec!["pld", "-", "--explain"], Some(&zz5)),
        (vec!["classify", "--loops", "4"], None),
        (vec!["glue", p, "4", p, "5", "--tail-to-head"], None),
        (
            vec![
                "identities",
                "selftest",
                "--sizes",
                "2..4",
                "--trials",
                "2",
                "--seed",
                "1",
            ],
            None,
        ),
        (vec!["count", "-", "--q", "2,3"], Some(&ws3)),
        (
            vec!["period", "-", "--samples", "20000", "--seed", "7"],
            Some(&ws3),
        ),
        (
            vec![
                "period",
                "-",
                "--samples",
                "20000",
                "--seed",
                "7",
                "--threads",
                "1",
            ],
            Some(&ws3),
        ),
    ];
    for (args, input) in cases {
        let a = ok(&args, input);
        let b = ok(&args, input);
        assert_eq!(a, b, "{args:?}");
    }
    let par = ok(
        &["period", "-", "--samples", "20000", "--seed", "7"],
        Some(&ws3),
    );
    let seq = ok(
        &[
            "period",
            "-",
            "--samples",
            "20000",
            "--seed",
            "7",
            "--threads",
            "1",
        ],
        Some(&ws3),
    );
    assert_eq!(par, seq);
    std::fs::remove_dir_all(dir).unwrap();
}
