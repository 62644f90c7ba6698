// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use ising_cn::config::parse_config;
use ising_cn::csv::{read_timeseries, TIMESERIES_HEADER};
use ising_cn::spin::Frame;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ising-cn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_csv_ending_at_duration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = run(&["simulate", "--preset", "params12", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), TIMESERIES_HEADER);
    let series = read_timeseries(text.as_bytes(), Frame::Primed).unwrap();
    assert_eq!(series.rows.len(), 1001);
    let last = series.last().unwrap();
    assert!((last.t - 31.41593408085229).abs() < 1e-9);
    assert!((last.amplitudes[2].im - 1.0).abs() < 1e-2);
}

#[test]
fn simulate_to_stdout_with_explicit_duration() {
    let o = run(&[
        "simulate",
        "--initial",
        "digital:00",
        "--frame",
        "raw",
        "--duration",
        "2",
        "--sample-dt",
        "0.5",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let series = read_timeseries(text.as_bytes(), Frame::Raw).unwrap();
    let times: Vec<f64> = series.rows.iter().map(|r| r.t).collect();
    assert_eq!(times, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
}

#[test]
fn tomography_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gate.csv");
    let o = run(&["tomography", "--out", path_str(&out)]);
    assert!(o.status.success());
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.contains("# frame = primed"));
    assert!(report.contains("# gcn_phases = 0, "));
    let csv_lines: Vec<&str> = report.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(csv_lines.len(), 5);
    assert!(csv_lines[0].starts_with("row,"));
}

#[test]
fn tomography_without_gcn_structure_exits_nonzero() {
    let o = run(&["tomography", "--duration", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stdout).contains("gcn_phases = none"));
}

#[test]
fn calibrate_writes_a_reloadable_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tuned.cfg");
    let o = run(&["calibrate", "--pure-cn", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# status = converged"));
    let tuned = parse_config(&text).unwrap();
    assert!(tuned.system.omega1 > 500.0);

    let gate = dir.path().join("gate.csv");
    let o = run(&[
        "tomography",
        "--config",
        path_str(&out),
        "--frame",
        "raw",
        "--out",
        path_str(&gate),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = std::fs::read_to_string(&gate).unwrap();
    let fidelity: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("# fidelity_i_cn = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(fidelity > 0.999);
}

#[test]
fn non_convergence_sets_exit_status() {
    let o = run(&["calibrate", "--pure-cn", "--free", "a2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stdout).contains("# status = not converged"));
}

#[test]
fn bad_inputs_fail_with_a_message() {
    let o = run(&["simulate", "--initial", "digital:21"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("00, 01, 10, 11"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "preset = params12\ncarrier = 100\n").unwrap();
    let o = run(&["simulate", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega2 - J"));
}

#[test]
fn sweep_rows_are_in_grid_order() {
    let o = run(&[
        "sweep", "--param", "a2", "--from", "0.09", "--to", "0.11", "--points", "9",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row[0], k as f64);
        assert!(row[3] > 0.999, "transfer {}", row[3]);
    }
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
}
