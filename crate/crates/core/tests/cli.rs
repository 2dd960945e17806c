use std::path::Path;
use std::process::{Command, Output};

use cubewcd::bench::read_dataset;
use cubewcd::cube::{CubeState, MoveSequence, StateKey};
use cubewcd::heuristic::DistanceTable;

fn cubewcd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubewcd"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, name: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(name).and_then(|r| r.strip_prefix(':')))
        .unwrap_or_else(|| panic!("no {name} line in {text:?}"))
        .trim()
}

fn build_table(dir: &Path, depth: u8) -> String {
    let path = dir.join(format!("d{depth}.cwdt"));
    let p = path.to_str().unwrap();
    let o = cubewcd(&["build-table", "--depth", &depth.to_string(), "--out", p]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    p.to_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cubewcd(&["--help"]).status.code(), Some(0));
    assert_eq!(cubewcd(&["solve", "--help"]).status.code(), Some(0));
    assert_eq!(cubewcd(&["--version"]).status.code(), Some(0));
    assert_eq!(cubewcd(&[]).status.code(), Some(2));
}

#[test]
fn empty_scramble_solves_in_zero_moves() {
    let o = cubewcd(&["solve", "--moves", "", "--table-depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "length"), "0");
    assert_eq!(field(&stdout(&o), "solution"), "");
}

#[test]
fn build_table_then_solve_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = build_table(dir.path(), 4);
    assert_eq!(
        DistanceTable::load(&table).unwrap().layer_sizes(),
        [1, 12, 114, 1068, 10011]
    );

    for heuristic in [["--heuristic", "exact"], ["--heuristic", "wcd"]] {
        let mut args = vec!["solve", "--moves", "F r U b", "--table", &table];
        args.extend(heuristic);
        let o = cubewcd(&args);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let moves: MoveSequence = field(&out, "solution").parse().unwrap();
        let start: MoveSequence = "F r U b".parse().unwrap();
        assert!(moves
            .apply_to(&start.apply_to(&CubeState::SOLVED))
            .is_solved());
        assert_eq!(field(&out, "length"), "4");
    }
}

#[test]
fn scramble_is_deterministic_and_solvable_by_key() {
    let a = stdout(&cubewcd(&["scramble", "--depth", "5", "--seed", "42"]));
    let b = stdout(&cubewcd(&["scramble", "--depth", "5", "--seed", "42"]));
    assert_eq!(a, b);
    let seq: MoveSequence = field(&a, "scramble").parse().unwrap();
    assert_eq!(seq.len(), 5);
    let key = field(&a, "key");
    assert_eq!(
        StateKey::from_hex(key).unwrap(),
        seq.apply_to(&CubeState::SOLVED).canonical_key()
    );

    let o = cubewcd(&[
        "solve",
        "--state",
        key,
        "--k",
        "2",
        "--mu",
        "0.5",
        "--policy",
        "boltzmann",
        "--table-depth",
        "5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let moves: MoveSequence = field(&stdout(&o), "solution").parse().unwrap();
    assert!(moves
        .apply_to(&seq.apply_to(&CubeState::SOLVED))
        .is_solved());
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["solve"],
        &["solve", "--moves", "R", "--state", "00"],
        &["solve", "--state", "xyz"],
        &["solve", "--state", "00000000000000000000000000"],
        &["solve", "--moves", "R", "--heuristic", "exact", "--k", "2"],
        &["solve", "--moves", "R", "--heuristic", "fast"],
        &["solve", "--moves", "R", "--mu", "1.0", "--table-depth", "1"],
        &["solve", "--moves", "R", "--policy", "greedy"],
        &[
            "solve",
            "--moves",
            "R",
            "--policy",
            "mlp:/nonexistent/w.json",
            "--table-depth",
            "1",
        ],
        &["solve", "--moves", "R", "--table", "/nonexistent/t.cwdt"],
        &["solve", "--moves", "R", "--max-time", "0"],
        &["solve", "--moves", "R", "--max-nodes", "0"],
        &["build-table", "--depth", "two", "--out", "x"],
        &["bench", "--config", "/nonexistent/cfg.json"],
    ];
    for args in cases {
        let o = cubewcd(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn node_limit_exits_one() {
    let o = cubewcd(&[
        "solve",
        "--moves",
        "R U F L D B",
        "--heuristic",
        "exact",
        "--table-depth",
        "3",
        "--max-nodes",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let table = build_table(dir.path(), 4);
    let csv_path = dir.path().join("out.csv");
    let json_path = dir.path().join("out.json");
    let cfg = serde_json::json!({
        "samples": 8,
        "min_depth": 2,
        "max_depth": 4,
        "seed": 3,
        "table": {"path": table},
        "heuristics": [
            {"kind": "exact"},
            {"kind": "deep-k", "k": 1, "mu": 0.5, "policy": "uniform"}
        ],
        "output": {"csv": csv_path, "json": json_path}
    });
    let cfg_path = dir.path().join("bench.json");
    std::fs::write(&cfg_path, cfg.to_string()).unwrap();

    let o = cubewcd(&["bench", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let table_text = stdout(&o);
    assert!(table_text.contains("exact") && table_text.contains("wcd-k1-mu0.5-uniform"));

    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "heuristic",
            "sample_index",
            "depth",
            "length",
            "time_s",
            "searched_nodes",
            "status"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| &r[6] == "ok"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["samples"].as_array().unwrap().len(), 8);
    assert_eq!(report["rows"][0]["solved"], 8);
}

#[test]
fn bench_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bench.json");
    for bad in [
        r#"{"samples": 5, "min_depth": 1, "max_depth": 2, "seed": 1, "heuristics": []}"#,
        r#"{"samples": 5, "min_depth": 3, "max_depth": 2, "seed": 1, "heuristics": [{"kind": "exact"}]}"#,
        r#"{"samples": 5, "min_depth": 1, "max_depth": 2, "seed": 1, "heuristics": [{"kind": "exact"}], "extra": 1}"#,
        "not json",
    ] {
        std::fs::write(&cfg_path, bad).unwrap();
        let o = cubewcd(&["bench", "--config", cfg_path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn export_dataset_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d2.tsv");
    let o = cubewcd(&[
        "export-dataset",
        "--depth",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "records"), "126");
    let recs = read_dataset(std::io::BufReader::new(std::fs::File::open(&out).unwrap())).unwrap();
    assert_eq!(recs.len(), 126);

    let table = build_table(dir.path(), 3);
    let o = cubewcd(&[
        "export-dataset",
        "--depth",
        "2",
        "--out",
        out.to_str().unwrap(),
        "--table",
        &table,
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = cubewcd(&[
        "export-dataset",
        "--depth",
        "3",
        "--out",
        out.to_str().unwrap(),
        "--table",
        &table,
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "records"), "1194");
}
