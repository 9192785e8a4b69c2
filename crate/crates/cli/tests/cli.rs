use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lifshitz_cli::commands::{run, Command as Sub, Options};
use lifshitz_cli::scenario::Scenario;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn lifshitz(args: &[&str], scenario: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lifshitz"));
    cmd.args(args);
    if let Some(p) = scenario {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i]).collect()
}

const IDEAL_SWEEP: &str = "[materials]\nhalfspace = ideal\n[thermal]\nT_K = 300\n\
    [sweep]\nvariable = d\nstart_um = 1\nstop_um = 10\npoints_count = 16\nspacing = log\n";

#[test]
fn parse_errors_report_line_numbers() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.ini", "[materials]\nhalfspace = ideal\n\n[geometry]\nd = 1\n");
    let out = lifshitz(&["free-energy"], Some(&p));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5: unknown key 'd' in [geometry]"), "{err}");

    let p = write(&dir, "bad2.ini", "[materials]\nhalfspace = gold\n");
    let err = String::from_utf8_lossy(&lifshitz(&["free-energy"], Some(&p)).stderr).to_string();
    assert!(err.contains("line 2") && err.contains("unknown model 'gold'"), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    for text in ["[thermal]\nT_K = 300\ncolour = red\n", "[output]\nprecision = 3\n"] {
        let err = Scenario::parse(text).unwrap_err().to_string();
        assert!(err.contains("unknown key"), "{err}");
    }
}

#[test]
fn ideal_sweep_is_monotone_in_distance() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "sweep.ini", IDEAL_SWEEP);
    let json = dir.path().join("sweep.json");
    let out = lifshitz(&["sweep", "--json", json.to_str().unwrap()], Some(&p));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header[..3], ["d_m", "T_K", "free_energy_J_per_m2"]);
    assert_eq!(rows.len(), 16);
    let d = column(&header, &rows, "d_m");
    let f = column(&header, &rows, "free_energy_J_per_m2");
    assert_eq!((d[0], d[15]), (1e-6, 1e-5));
    for i in 1..16 {
        assert!(d[i] > d[i - 1] && f[i] < 0.0 && f[i].abs() < f[i - 1].abs(), "row {i}");
    }
    let sidecar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(sidecar["records"].as_array().unwrap().len(), 16);
    assert_eq!(sidecar["diagnostics"][3]["sweep_var"]["name"], "d");
    assert!(sidecar["incomplete"].is_null());
}

#[test]
fn every_number_has_fifteen_digits() {
    let s = Scenario::parse(IDEAL_SWEEP).unwrap();
    let csv = run(Sub::Sweep, &s, &Options::default()).unwrap().csv();
    for line in csv.lines().skip(1) {
        for cell in line.split(',') {
            if cell.contains('e') {
                let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
                assert_eq!(mantissa.len(), 16, "{cell}");
            }
        }
    }
}

#[test]
fn identical_media_give_exact_zero() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "same.ini",
        "[materials]\nhalfspace = constant\nhalfspace_eps_rel = 3\ngap = constant\ngap_eps_rel = 3\n\
         [geometry]\nd_um = 1\n[thermal]\nT_K = 300\n",
    );
    let out = lifshitz(&["free-energy"], Some(&p));
    assert!(out.status.success());
    let (header, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(column(&header, &rows, "free_energy_J_per_m2"), vec![0.0]);
}

#[test]
fn nuclear_demo_needs_acknowledgement() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "n.ini", "[geometry]\nd_fm = 1\n[thermal]\nT_K = 1.6246e12\n");
    let out = lifshitz(&["nuclear-demo"], Some(&p));
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let out = lifshitz(&["nuclear-demo", "--demo-acknowledge"], Some(&p));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# order-of-magnitude demo"));
    let (header, rows) = parse_csv(&text);
    let n0 = column(&header, &rows, "term_n0_MeV")[0];
    assert!(n0 < 0.0 && n0.abs() > 0.1 && n0.abs() < 10.0, "{n0}");
}

#[test]
fn failing_point_leaves_flagged_partial_csv() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "n.ini",
        "[thermal]\nT_K = 1.6246e12\n[sweep]\nvariable = d\nstart_fm = 2\nstop_fm = 20\npoints_count = 10\n",
    );
    let csv = dir.path().join("out.csv");
    let out = lifshitz(&["nuclear-demo", "--demo-acknowledge", "--out", csv.to_str().unwrap()], Some(&p));
    assert_eq!(out.status.code(), Some(2));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.trim_end().lines().last().unwrap().starts_with("# INCOMPLETE:"));
    let (_, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 5);
}

#[test]
fn classical_curve_pressure_is_two_f_over_d() {
    let s = Scenario::parse(
        "[materials]\nhalfspace = ideal\n[thermal]\nT_K = 2000\n\
         [sweep]\nvariable = d\nstart_um = 20\nstop_um = 40\npoints_count = 33\nspacing = log\n",
    )
    .unwrap();
    let opts = Options {
        pressure: true,
        ..Options::default()
    };
    let report = run(Sub::Sweep, &s, &opts).unwrap();
    let (header, rows) = parse_csv(&report.csv());
    let d = column(&header, &rows, "d_m");
    let f = column(&header, &rows, "free_energy_J_per_m2");
    let p = column(&header, &rows, "pressure_Pa");
    let e = column(&header, &rows, "pressure_error_Pa");
    for i in 0..d.len() {
        let expected = 2.0 * f[i] / d[i];
        let dev = (p[i] - expected).abs();
        assert!(dev <= e[i], "row {i}: {} vs {expected}, error column {}", p[i], e[i]);
        if i > 0 && i + 1 < d.len() {
            assert!(dev <= 2e-3 * expected.abs(), "row {i}");
        }
    }
}

#[test]
fn pressure_needs_three_points() {
    let s = Scenario::parse(
        "[materials]\nhalfspace = ideal\n[thermal]\nT_K = 300\n\
         [sweep]\nvariable = d\nstart_um = 1\nstop_um = 2\npoints_count = 2\n",
    )
    .unwrap();
    let opts = Options {
        pressure: true,
        ..Options::default()
    };
    let err = run(Sub::Sweep, &s, &opts).unwrap_err().to_string();
    assert!(err.contains("at least 3 points"), "{err}");
}

#[test]
fn natural_units_relabel_columns() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "g.ini", "[geometry]\nd_um = 1\n[thermal]\nT_K = 300\n[output]\nunits = natural\n");
    let out = lifshitz(&["plasma-gap"], Some(&p));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header[0], "d_fm");
    assert!((column(&header, &rows, "d_fm")[0] / 1e9 - 1.0).abs() < 1e-12);
    let out = lifshitz(&["plasma-gap", "--units", "si"], Some(&p));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("d_m,T_K,"));
}

#[test]
fn in_process_thread_counts_agree() {
    let s = Scenario::parse(IDEAL_SWEEP).unwrap();
    let csv = |n| lifshitz_cli::with_threads(Some(n), || run(Sub::Sweep, &s, &Options::default()).unwrap().csv());
    assert_eq!(csv(1).unwrap(), csv(8).unwrap());
}
