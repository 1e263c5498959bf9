use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn hopforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopforge"))
        .args(args)
        .env_remove("HOPFORGE_CONFIG")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hopforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const GA: &str = "c GA\np sp 3 2\na 1 2 -2\na 2 3 3\n";
const GB: &str = "p sp 2 2\na 1 2 -1\na 2 1 0\n";

#[test]
fn solve_ga() {
    let input = write("ga.gr", GA);
    let out = hopforge(&["solve", "--input", s(&input), "--source", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["format_version"], 1);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["dist"], serde_json::json!([0, -2, 1]));
    assert_eq!(r["verified"], true);
    assert!(r["iterations"].is_array());
    assert!(r["counters"]["pops"].is_u64());
}

#[test]
fn solve_ga_from_other_source_marks_unreachable() {
    let input = write("ga2.gr", GA);
    let out = hopforge(&["solve", "--input", s(&input), "--source", "2", "--baseline", "bf"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dist"], serde_json::json!([null, 0, 3]));
}

#[test]
fn solve_gb_reports_cycle() {
    let input = write("gb.gr", GB);
    for baseline in ["auto", "bf"] {
        let out = hopforge(&["solve", "--input", s(&input), "--source", "1", "--baseline", baseline]);
        assert_eq!(out.status.code(), Some(1));
        let r = json(&out);
        assert_eq!(r["status"], "negative_cycle");
        assert_eq!(r["cycle_length"], -1);
        let cycle = r["cycle"].as_array().unwrap();
        assert_eq!(cycle.first(), cycle.last());
    }
}

#[test]
fn gen_then_solve_is_byte_identical() {
    let instance = scratch("gen.gr");
    let gen = hopforge(&["gen", "--mode", "shifted", "--n", "300", "--m", "1500", "--seed", "7", "--out", s(&instance)]);
    assert_eq!(gen.status.code(), Some(0));
    let run = || hopforge(&["solve", "--input", s(&instance), "--source", "1", "--seed", "11"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    // And the distances are the baseline's.
    let bf = hopforge(&["solve", "--input", s(&instance), "--source", "1", "--baseline", "bf"]);
    assert_eq!(json(&a)["dist"], json(&bf)["dist"]);
}

#[test]
fn gen_is_deterministic() {
    let (x, y) = (scratch("det1.gr"), scratch("det2.gr"));
    for p in [&x, &y] {
        let out = hopforge(&["gen", "--mode", "planted-cycle", "--n", "50", "--m", "200", "--seed", "3", "--out", s(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
    let out = hopforge(&["solve", "--input", s(&x), "--source", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_2() {
    let bad = write("bad.gr", "p sp 3 2\na 1 5 0\n");
    let out = hopforge(&["solve", "--input", s(&bad), "--source", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["status"], "error");
    assert!(r["error"].as_str().unwrap().contains("line 2"));

    let ga = write("ga3.gr", GA);
    for args in [
        vec!["solve", "--input", s(&ga), "--source", "4"],
        vec!["solve", "--input", s(&ga), "--source", "1", "--config", "c0=0"],
        vec!["solve", "--input", s(&ga), "--source", "1", "--config", "nonsense=1"],
        vec!["solve", "--input", "/nonexistent/file.gr", "--source", "1"],
        vec!["gen", "--mode", "uniform", "--n", "0", "--m", "3", "--out", "/dev/null"],
        vec!["inspect-reducer", "--input", s(&ga), "--u-set", "2"],
    ] {
        assert_eq!(hopforge(&args).status.code(), Some(2), "{args:?}");
    }
    // Usage errors from the argument parser use the same code.
    assert_eq!(hopforge(&["solve"]).status.code(), Some(2));
}

#[test]
fn verify_accepts_reports_and_rejects_tampering() {
    let input = write("gv.gr", GA);
    let report = hopforge(&["solve", "--input", s(&input), "--source", "1"]);
    let path = scratch("gv.json");
    std::fs::write(&path, &report.stdout).unwrap();
    let out = hopforge(&["verify", "--input", s(&input), "--result", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verified"], true);

    let mut r = json(&report);
    r["dist"][2] = serde_json::json!(2);
    std::fs::write(&path, r.to_string()).unwrap();
    let out = hopforge(&["verify", "--input", s(&input), "--result", s(&path)]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::write(&path, "{not json").unwrap();
    let out = hopforge(&["verify", "--input", s(&input), "--result", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_accepts_cycle_reports() {
    let input = write("gbv.gr", GB);
    let report = hopforge(&["solve", "--input", s(&input), "--source", "2"]);
    let path = scratch("gbv.json");
    std::fs::write(&path, &report.stdout).unwrap();
    let out = hopforge(&["verify", "--input", s(&input), "--result", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result_status"], "negative_cycle");
}

#[test]
fn config_file_from_environment() {
    let input = write("gc.gr", GA);
    let cfg = write("cfg.toml", "retry_cap = 2\ncleanup_threshold = 0\nreducer_floor = 0.0\n");
    let out = Command::new(env!("CARGO_BIN_EXE_hopforge"))
        .args(["solve", "--input", s(&input), "--source", "1"])
        .env("HOPFORGE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // With cleanup disabled the single negative vertex goes through the probe.
    assert_ne!(json(&out)["iterations"][0]["regime"], "cleanup");

    let broken = write("broken.toml", "retry_cap = \"many\"\n");
    let out = Command::new(env!("CARGO_BIN_EXE_hopforge"))
        .args(["solve", "--input", s(&input), "--source", "1"])
        .env("HOPFORGE_CONFIG", &broken)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timings_are_opt_in() {
    let input = write("gt.gr", GA);
    let plain = json(&hopforge(&["solve", "--input", s(&input), "--source", "1"]));
    assert!(plain["iterations"][0].get("wall_ms").is_none());
    let timed = json(&hopforge(&["solve", "--input", s(&input), "--source", "1", "--timings"]));
    assert!(timed["iterations"][0]["wall_ms"].is_number());
}

#[test]
fn bench_writes_rows() {
    let out_path = scratch("bench.json");
    let out = hopforge(&["bench", "--suite", "small", "--seeds", "2", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|row| row["agrees"] == true && row["verified"] == true));
    assert_eq!(hopforge(&["bench", "--suite", "nope", "--out", s(&out_path)]).status.code(), Some(2));
}

#[test]
fn inspect_reducer_dumps_tagged_arcs() {
    // Two negative arcs feeding a chain: U = {1, 3}.
    let input = write("gi.gr", "p sp 5 5\na 1 2 -3\na 2 3 4\na 3 4 -2\na 4 5 1\na 5 1 6\n");
    let out = hopforge(&["inspect-reducer", "--input", s(&input), "--u-set", "1,3", "--h", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("reducer level 2 "), "{header}");
    for kind in ["base", "self"] {
        assert!(text.lines().any(|l| l.starts_with("arc ") && l.contains(&format!(" {kind} "))), "{kind}\n{text}");
    }
    // Self arcs are the hop arcs of H; everything else is nonnegative.
    for line in text.lines().filter(|l| l.starts_with("arc ")) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let reweighted: i64 = fields.last().unwrap().parse().unwrap();
        assert!(fields[3] == "self" || reweighted >= 0, "{line}");
    }
}
