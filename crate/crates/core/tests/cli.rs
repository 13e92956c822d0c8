//! Runs the `hfloquet` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lattice(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(format!("../../data/lattices/{name}.lat"))
        .display()
        .to_string()
}

fn hfloquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfloquet"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_and_params() {
    let o = hfloquet(&["validate", &lattice("H64")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "valid: n=64 girth=8 edges=96 faces=24 (g=8 b=8 r=8) genus=5\n"
    );

    let o = hfloquet(&["params", &lattice("H144")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()),
        (Some(144), Some(20), Some(6))
    );
}

#[test]
fn exit_codes() {
    assert_eq!(hfloquet(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        hfloquet(&["validate", "/nonexistent.lat"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lat");
    std::fs::write(&bad, "n 4 girth 8\ne 0 1 g\ne 0 1 b\n").unwrap();
    let o = hfloquet(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let h16 = lattice("H16");
    let o = hfloquet(&[
        "sweep",
        "--lattices",
        &h16,
        "--p",
        "0.01,0.02",
        "--shots",
        "100",
        "--max-shots",
        "150",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = hfloquet(&["sweep", "--lattices", &h16, "--p", "0.7", "--shots", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn color_recovers_a_valid_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let text = std::fs::read_to_string(lattice("H16")).unwrap();
    let stripped: String = text
        .lines()
        .map(|l| l.split_whitespace().take(3).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    let stripped = stripped.replace("n 16 girth\n", "n 16 girth 8\n");
    std::fs::write(&graph, stripped).unwrap();
    let out = dir.path().join("colored.lat");
    let o = hfloquet(&[
        "color",
        graph.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = hfloquet(&["validate", out.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("valid: n=16 girth=8"));
}

#[test]
fn sweep_csv_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &config,
        format!(
            "lattices = {}\np = 0.01, 0.03\nshots = 500\nseed = 3\n",
            lattice("H16")
        ),
    )
    .unwrap();
    let o = hfloquet(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--shots",
        "400",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        lines[0],
        "code,p,shots,fails_any,fails_one,rate_any,rate_one,ci_lo,ci_hi,R,seed"
    );
    assert_eq!(lines.len(), 3);
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(
            (cells[0], cells[2], cells[9], cells[10]),
            ("H16", "400", "6", "3")
        );
    }
    assert!(text
        .lines()
        .any(|l| l.starts_with("# config ") && l.contains("\"shots\":400")));
}

#[test]
fn dump_dem_is_reproducible() {
    let a = hfloquet(&["dump-dem", &lattice("H16"), "--p", "0.01", "--rounds", "6"]);
    let b = hfloquet(&["dump-dem", &lattice("H16"), "--p", "0.01", "--rounds", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}
