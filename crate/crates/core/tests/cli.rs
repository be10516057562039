use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phonobands::output::read_csv;

const SMALL: &str = r#"
[materials.aluminum]
E = 7.31e10
nu = 0.325
rho = 2770.0

[cell]
layout = "homogeneous"
material = "aluminum"

[discretization]
nodes_per_side = 5

[sweep]
path = "G-X-M-G"
samples = 4
n_modes = 6

[output]
formats = ["csv", "json"]
"#;

const BILAYER: &str = r#"
[materials.aluminum]
E = 7.31e10
nu = 0.325
rho = 2770.0

[materials.brass]
E = 9.2e10
nu = 0.33
rho = 8270.0

[cell]
layout = "bilayer"
bottom = "aluminum"
top = "brass"
half_width = 0.1
half_height = 1.0

[discretization]
ny = 2
nodes_per_side = 6

[sweep]
samples = 6
n_modes = 4
"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_phonobands"));
    c.env_remove("PHONOBANDS_THREADS");
    c
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn dispersion(config: &Path, out: &Path, extra: &[&str]) -> Output {
    run(bin()
        .arg("dispersion")
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra))
}

#[test]
fn csv_has_one_row_per_sample_and_mode() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    dispersion(&cfg, &out, &[]);
    let text = fs::read_to_string(out.join("dispersion.csv")).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    // three segments of four samples share two interior vertices
    assert_eq!(data.len(), 1 + 10 * 6);
    assert!(data[0].starts_with("path_coordinate,k_x,k_y,mode_index,omega"));
    let parsed = read_csv(text.as_bytes()).unwrap();
    assert_eq!(parsed.result.samples.len(), 10);
    assert!(parsed.config_hash.is_some());
    assert!(out.join("summary.json").exists());
    assert!(!out.join("bands.svg").exists());
}

#[test]
fn reruns_and_thread_counts_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    dispersion(&cfg, &a, &[]);
    dispersion(&cfg, &b, &["--threads", "3"]);
    run(bin()
        .env("PHONOBANDS_THREADS", "2")
        .args(["dispersion", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&c));
    for file in ["dispersion.csv", "summary.json"] {
        let reference = fs::read(a.join(file)).unwrap();
        assert_eq!(reference, fs::read(b.join(file)).unwrap(), "{file}");
        assert_eq!(reference, fs::read(c.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn svg_flag_adds_a_plot_and_nothing_else_changes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let plain = tmp.path().join("plain");
    let plotted = tmp.path().join("plotted");
    dispersion(&cfg, &plain, &[]);
    dispersion(&cfg, &plotted, &["--svg"]);
    let svg = fs::read_to_string(plotted.join("bands.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    for file in ["dispersion.csv", "summary.json"] {
        assert_eq!(fs::read(plain.join(file)).unwrap(), fs::read(plotted.join(file)).unwrap());
    }
}

#[test]
fn compare_reports_bilayer_residual_per_branch() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BILAYER);
    let out_dir = tmp.path().join("out");
    let out = run(bin()
        .args(["compare", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("layered-medium residual"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    let branches = report["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 4);
    // the two acoustic branches are well resolved at this order
    for b in &branches[..2] {
        assert!(b["max"].as_f64().unwrap() < 1e-3, "{b}");
    }

    // comparing a saved CSV gives the same report
    let again = tmp.path().join("again");
    run(bin()
        .args(["compare", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&again)
        .arg("--result")
        .arg(out_dir.join("dispersion.csv")));
    assert_eq!(
        fs::read(out_dir.join("report.json")).unwrap(),
        fs::read(again.join("report.json")).unwrap()
    );
}

#[test]
fn analytic_writes_bilayer_stop_bands() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BILAYER);
    let out = tmp.path().join("out");
    run(bin().args(["analytic", "--config"]).arg(&cfg).arg("--out").arg(&out));
    let csv = fs::read_to_string(out.join("analytic.csv")).unwrap();
    assert!(csv.starts_with("family,band,k_y,omega,omega_normalized"));
    let gaps: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("analytic.json")).unwrap()).unwrap();
    assert_eq!(gaps.as_array().unwrap().len(), 2);
}

#[test]
fn invalid_config_fails_with_a_message() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &SMALL.replace("nodes_per_side = 5", "nodes_per_side = 1"));
    let out = bin()
        .args(["dispersion", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());

    let unknown = write_config(tmp.path(), &format!("{SMALL}\n[extra]\nx = 1\n"));
    let out = bin().args(["dispersion", "--config"]).arg(&unknown).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra"));

    let out = bin().args(["dispersion", "--config", "/no/such/file.toml"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn runge_and_quadcheck_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(bin().arg("runge").arg("--out").arg(tmp.path()));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("lobatto"));
    let table = fs::read_to_string(tmp.path().join("runge.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);

    run(bin().args(["quadcheck", "--max-degree", "5", "--out"]).arg(tmp.path()));
    let table = fs::read_to_string(tmp.path().join("quadcheck.csv")).unwrap();
    for line in table.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let n = cols.len();
        assert_eq!(cols[n - 2], cols[n - 1], "{line}");
    }
}
