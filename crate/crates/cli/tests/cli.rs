use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const MAP: &str = "type octile\nheight 6\nwidth 6\nmap\n......\n..@@..\n...@..\n...@..\n......\n@.....\n";

fn vbmo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vbmo"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn write_map(dir: &Path) -> String {
    let path = dir.join("m.map");
    std::fs::write(&path, MAP).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn plan_reports_winner_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let map = write_map(dir.path());
    let args = [
        "plan",
        "--map",
        &map,
        "--objectives",
        "distance,uniform:1,random:1:20:7",
        "--start",
        "0,0",
        "--goal",
        "5,5",
        "--mechanism",
        "range",
    ];
    let mut a = json(&vbmo(&args));
    let mut b = json(&vbmo(&args));
    let winner = a["winner"].as_u64().unwrap();
    assert!(winner < 3);
    assert_eq!(a["plans"].as_array().unwrap().len(), 3);
    assert_eq!(a["plans"][0]["cells"][0], serde_json::json!([0, 0]));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(a, b);
}

#[test]
fn obstacle_goal_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let map = write_map(dir.path());
    let out = vbmo(&[
        "plan",
        "--map",
        &map,
        "--objectives",
        "distance",
        "--start",
        "0,0",
        "--goal",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(1,2)") && err.contains("obstacle"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unreachable_goal_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.map");
    std::fs::write(&path, "type octile\nheight 3\nwidth 3\nmap\n.@.\n.@.\n.@.\n").unwrap();
    let map = path.to_str().unwrap();
    let out = vbmo(&[
        "plan",
        "--map",
        map,
        "--objectives",
        "distance,uniform:1",
        "--start",
        "0,0",
        "--goal",
        "2,2",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let map = write_map(dir.path());
    let base = ["plan", "--map", map.as_str(), "--start", "0,0", "--goal", "5,5"];
    for extra in [
        &["--objectives", "distance", "--bogus"][..],
        &["--objectives", "distance", "--mechanism", "plurality"],
        &["--objectives", "altitude"],
        &["--objectives", "distance", "--heuristic-mode", "greedy"],
    ] {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        assert_eq!(vbmo(&args).status.code(), Some(2), "{extra:?}");
    }
    assert_eq!(vbmo(&["inspect", "--map", "/nonexistent/x.map"]).status.code(), Some(2));
}

#[test]
fn help_is_available() {
    for sub in ["plan", "bench", "oracle", "inspect"] {
        let out = vbmo(&[sub, "--help"]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).contains("--"));
    }
}

#[test]
fn inspect_single_cell_map() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.map");
    std::fs::write(&path, "type octile\nheight 1\nwidth 1\nmap\n.\n").unwrap();
    let v = json(&vbmo(&["inspect", "--map", path.to_str().unwrap()]));
    assert_eq!(v["nodes"], 1);
    assert_eq!(v["edges"], 0);
    assert_eq!(v["average_degree"], 0.0);
    assert_eq!(v["components"], 1);
}

#[test]
fn inspect_road_network_notes_reference_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("d.gr");
    std::fs::write(&gr, "p sp 3 3\na 1 2 5\na 2 3 5\na 3 1 5\n").unwrap();
    let v = json(&vbmo(&["inspect", "--map", gr.to_str().unwrap()]));
    assert_eq!(v["nodes"], 3);
    assert_eq!(v["arcs"], 3);
    assert!(v["note"].as_str().unwrap().contains("published NY"));
}

#[test]
fn plan_on_road_network_uses_node_ids() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("d.gr");
    let time = dir.path().join("t.gr");
    std::fs::write(&gr, "p sp 4 4\na 1 2 1\na 2 4 1\na 1 3 2\na 3 4 2\n").unwrap();
    std::fs::write(&time, "p sp 4 4\na 1 2 9\na 2 4 9\na 1 3 1\na 3 4 1\n").unwrap();
    let v = json(&vbmo(&[
        "plan",
        "--map",
        gr.to_str().unwrap(),
        "--time",
        time.to_str().unwrap(),
        "--objectives",
        "distance,time",
        "--start",
        "1",
        "--goal",
        "4",
    ]));
    assert_eq!(v["plans"][0]["vertices"], serde_json::json!([0, 1, 3]));
    assert_eq!(v["plans"][1]["vertices"], serde_json::json!([0, 2, 3]));
    assert!(v["plans"][0].get("cells").is_none());
}

#[test]
fn oracle_prints_frontier() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.map");
    std::fs::write(&path, "type octile\nheight 2\nwidth 3\nmap\n...\n...\n").unwrap();
    let v = json(&vbmo(&[
        "oracle",
        "--map",
        path.to_str().unwrap(),
        "--objectives",
        "distance,uniform:1",
        "--start",
        "0,0",
        "--goal",
        "1,2",
    ]));
    assert!(v["paths"].as_u64().unwrap() > 1);
    let frontier = v["frontier"].as_array().unwrap();
    assert!(!frontier.is_empty());
    // Two steps (one diagonal) is optimal for both objectives here.
    assert_eq!(v["optima"][1]["cost"], 2.0);
    for f in frontier {
        assert_eq!(f["costs"][1], 2.0);
    }
    let capped = vbmo(&[
        "oracle",
        "--map",
        path.to_str().unwrap(),
        "--objectives",
        "distance",
        "--start",
        "0,0",
        "--goal",
        "1,2",
        "--cap",
        "1",
    ]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn bench_writes_reproducible_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let maps = dir.path().join("maps");
    std::fs::create_dir(&maps).unwrap();
    write_map(&maps);
    std::fs::write(
        maps.join("open.map"),
        "type octile\nheight 5\nwidth 7\nmap\n.......\n.......\n.......\n.......\n.......\n",
    )
    .unwrap();
    let run = |out: &Path| {
        vbmo(&[
            "bench",
            "--maps",
            maps.to_str().unwrap(),
            "--objectives",
            "distance,uniform:1,random:1:20",
            "--runs",
            "8",
            "--seed",
            "3",
            "--omit-time",
            "--out",
            out.to_str().unwrap(),
        ])
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let summary = json(&run(&a));
    json(&run(&b));
    let csv = std::fs::read(a.join("records.csv")).unwrap();
    assert_eq!(csv, std::fs::read(b.join("records.csv")).unwrap());
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 1 + 2 * 8 * 4);
    assert_eq!(summary["maps"], 2);
    assert!(summary["comparisons"]["range"]["score"]["p_value"].is_number());
    assert!(a.join("summary.json").exists());
    assert!(std::fs::read_to_string(a.join("table.txt"))
        .unwrap()
        .contains("Distance, Uniform = 1"));
}

#[test]
fn bench_rejects_bad_thread_setting() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_vbmo"))
        .args([
            "bench",
            "--synthetic",
            "1",
            "--objectives",
            "distance,uniform:1",
            "--runs",
            "2",
            "--out",
        ])
        .arg(dir.path())
        .env("VBMO_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_sampling_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dots.map");
    std::fs::write(&path, "type octile\nheight 1\nwidth 5\nmap\n.@.@.\n").unwrap();
    let out = vbmo(&[
        "bench",
        "--maps",
        path.to_str().unwrap(),
        "--objectives",
        "distance,uniform:1",
        "--runs",
        "3",
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}
