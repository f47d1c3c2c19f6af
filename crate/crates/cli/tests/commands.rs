use std::path::PathBuf;
use std::process::Command;

use hyd2d::run::{self, ExportKind, SCAN_COLUMNS, SOLVE_COLUMNS};
use hyd2d::verify::{verify, Table, VerifyOptions};
use hyd2d::{Format, MassSpec, RunConfig, TargetSpec};
use hyd2d_core::reference::tables::TABLE3;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyd2d"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyd2d-commands-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cfg(b: f64, alpha: f64, mass: MassSpec) -> RunConfig {
    RunConfig {
        b: vec![b],
        alpha_degrees: vec![alpha],
        mass,
        ..RunConfig::default()
    }
}

#[test]
fn solve_examples() {
    let r = run::solve(&cfg(1.0, 0.0, MassSpec::Infinite)).unwrap();
    assert!((r.energy.unwrap() - TABLE3[3].1).abs() <= 1e-6);
    let r = run::solve(&cfg(0.0, 0.0, MassSpec::Finite(1836.152673))).unwrap();
    assert!((r.energy.unwrap() + 1.99891136).abs() <= 1e-8);
    let r = run::solve(&cfg(0.0, 37.0, MassSpec::Infinite)).unwrap();
    assert!((r.energy.unwrap() + 2.0).abs() <= 1e-8);
    assert!(r.converged() && r.n.is_some() && r.iterations.is_some());
}

#[test]
fn solve_binary_writes_one_csv_row() {
    let out = bin()
        .args(["solve", "--B", "1", "--alpha", "0", "--mass", "infinite"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SOLVE_COLUMNS.join(","));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!((row[3].parse::<f64>().unwrap() + 1.955159).abs() <= 1e-6);
    assert_eq!(row[9], "ok");
    assert!(lines.next().is_none());
}

#[test]
fn failed_solve_still_writes_a_record() {
    // l = 1 does not fit in a basis with M = 0
    let path = scratch("failed.json");
    let out = bin()
        .args([
            "solve",
            "--B",
            "0",
            "--N",
            "100",
            "--rhoN",
            "20",
            "--M",
            "0",
            "--target",
            "level:2,1",
        ])
        .args(["--format", "json-lines", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert!(record["status"].as_str().unwrap().starts_with("error"));
    assert!(record["E"].is_null());
}

#[test]
fn scan_keeps_input_order_and_reports_asymptotes() {
    let mut c = cfg(0.0, 0.0, MassSpec::Infinite);
    c.b = vec![0.25, 0.1];
    c.alpha_degrees = vec![0.0];
    c.jobs = Some(2);
    let rows = run::scan(&c).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.b).collect::<Vec<_>>(),
        vec![0.25, 0.1]
    );
    for r in &rows {
        // three decimals
        assert!((r.energy.unwrap() - r.weak).abs() < 5e-4);
        assert!(r.strong.is_some());
    }

    let mut z = cfg(0.0, 0.0, MassSpec::Infinite);
    z.alpha_degrees = vec![0.0, 20.0, 45.0, 90.0];
    let rows = run::scan(&z).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!((r.energy.unwrap() - rows[0].energy.unwrap()).abs() <= 1e-7);
        assert_eq!(r.strong, None);
        assert_eq!(r.status, "ok");
    }
}

#[test]
fn scan_flags_failures_and_continues() {
    let mut c = cfg(0.0, 0.0, MassSpec::Infinite);
    c.b = vec![0.0, 1.0];
    c.target = TargetSpec::Level {
        n: 2,
        l: 1,
        shift: None,
    };
    c.n = Some(200);
    let rows = run::scan(&c).unwrap();
    assert_eq!(rows[0].status, "ok");
    assert!(rows[1].status.starts_with("error"), "{}", rows[1].status);
}

#[test]
fn scan_csv_header_is_stable() {
    let path = scratch("scan.csv");
    let out = bin()
        .args([
            "scan", "--B", "0,0.5", "--alpha", "0", "--N", "400", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), SCAN_COLUMNS.join(","));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn config_file_with_flag_override() {
    let path = scratch("run.cfg");
    std::fs::write(
        &path,
        "B = 4\nalpha = 0\ntarget = level:2,0@3.99\nN = 800\nrhoN = 30\nformat = json-lines\n",
    )
    .unwrap();
    let out = bin()
        .arg("solve")
        .arg("--config")
        .arg(&path)
        .args(["--B", "4"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["E"].as_f64().unwrap() - 4.0).abs() <= 5e-7);
    assert_eq!(v["N"].as_u64(), Some(800));
}

#[test]
fn help_states_units_and_columns() {
    let out = bin().arg("--help").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2.35e5 T"));
    assert!(text.contains(&SOLVE_COLUMNS.join(",")));
    assert!(text.contains(&SCAN_COLUMNS.join(",")));
}

#[test]
fn bad_arguments_exit_with_error() {
    let out = bin().args(["solve", "--alpha", "120"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["verify", "table9"]).output().unwrap();
    assert!(!out.status.success());
    let out = bin()
        .args(["solve", "--config", "/nonexistent/run.cfg"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/run.cfg"));
}

#[test]
fn potential_export_is_coulomb_at_zero_field() {
    let mut c = cfg(0.0, 0.0, MassSpec::Infinite);
    c.extent = Some(2.0);
    c.resolution = 5;
    let field = run::export(ExportKind::Potential, &c).unwrap();
    let parsed = run::parse_grid(&run::render_grid(&field)).unwrap();
    assert_eq!(parsed, field);
    for iy in 0..5 {
        for ix in 0..5 {
            let rho = field.x(ix).hypot(field.y(iy)).max(1e-3);
            assert_eq!(field.get(ix, iy), -1.0 / rho);
        }
    }
}

#[test]
fn density_export_is_normalized_round_and_reproducible() {
    let a = scratch("density-a.txt");
    let b = scratch("density-b.txt");
    for path in [&a, &b] {
        let out = bin()
            .args([
                "export", "density", "--B", "1000", "--alpha", "0", "--N", "300", "--rhoN", "1.5",
                "--M", "0",
            ])
            .args(["--resolution", "81", "--out"])
            .arg(path)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let field = run::parse_grid(std::str::from_utf8(&text).unwrap()).unwrap();
    assert!(text.starts_with(b"# x_min x_max y_min y_max nx ny\n"));
    assert!(
        (field.integrate() - 1.0).abs() <= 0.02,
        "{}",
        field.integrate()
    );
    let n = field.nx;
    for iy in 0..n {
        for ix in 0..n {
            let (v, w) = (field.get(ix, iy), field.get(iy, n - 1 - ix));
            assert!((v - w).abs() <= 1e-9 * (1.0 + v), "{v} {w}");
        }
    }
}

#[test]
fn record_formats() {
    let record = run::solve(&RunConfig {
        n: Some(200),
        ..cfg(0.0, 0.0, MassSpec::Infinite)
    })
    .unwrap();
    let mut csv = Vec::new();
    run::write_records(std::slice::from_ref(&record), Format::Csv, &mut csv).unwrap();
    let mut json = Vec::new();
    run::write_records(&[record.clone(), record], Format::JsonLines, &mut json).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 2);
    let json = String::from_utf8(json).unwrap();
    assert_eq!(json.lines().count(), 2);
    let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, serde_json::Value>>(
        json.lines().next().unwrap(),
    )
    .unwrap()
    .keys()
    .cloned()
    .collect();
    let mut expected: Vec<String> = SOLVE_COLUMNS.iter().map(|s| s.to_string()).collect();
    expected.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, expected);
}

#[test]
fn verify_table1_passes() {
    let checks = verify(&[Table::T1], &VerifyOptions::default()).unwrap();
    assert_eq!(checks.len(), 10);
    assert!(
        checks.iter().all(|c| c.pass()),
        "{}",
        checks
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn reversed_zeeman_fails_table5_only() {
    let opts = VerifyOptions {
        reverse_zeeman: true,
        jobs: None,
    };
    let checks = verify(&[Table::T1, Table::T5], &opts).unwrap();
    assert!(checks
        .iter()
        .filter(|c| c.table == Table::T1)
        .all(|c| c.pass()));
    assert!(checks
        .iter()
        .filter(|c| c.table == Table::T5)
        .any(|c| !c.pass()));
    let row = checks
        .iter()
        .find(|c| c.table == Table::T5 && c.label.contains("B=0.0545241"))
        .unwrap();
    assert!(!row.pass());
}

#[test]
fn verify_table5_lists_the_published_rows() {
    let checks = verify(&[Table::T5], &VerifyOptions::default()).unwrap();
    assert_eq!(checks.len(), 22);
    assert!(checks.iter().all(|c| c.pass()));
    let lz = checks
        .iter()
        .find(|c| c.label == "n=5 l=1 B=0.0545241 |<Lz>-l|")
        .unwrap();
    assert!(*lz.computed.as_ref().unwrap() <= 1e-6, "{lz}");
}
