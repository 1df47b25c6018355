use std::path::Path;
use std::process::{Command, Output};

fn kg5d(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kg5d"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .env_remove("KG5D_OUTPUT_DIR")
        .output()
        .unwrap()
}

/// Data rows of a CSV artifact, header comments and column names dropped.
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn unknown_flag_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(kg5d(dir.path(), &["spectrum", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn bad_format_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(kg5d(dir.path(), &["spectrum", "--formats", "csv,xml"]).status.code(), Some(2));
}

#[test]
fn out_of_range_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = kg5d(dir.path(), &["figure1", "--r-max", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kg5d(dir.path(), &["partition", "--Z", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // An unreachable order makes the refinement checks fail.
    let out = kg5d(dir.path(), &["verify-geometry", "--order-min", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(dir.path().join("verify_geometry.json").exists());
}

#[test]
fn zero_charge_spectrum_is_free() {
    let dir = tempfile::tempdir().unwrap();
    assert!(kg5d(dir.path(), &["spectrum", "--Z", "0", "--n-max", "3", "--formats", "csv"]).status.success());
    let table = rows(&dir.path().join("spectrum.csv"));
    assert_eq!(table.len(), 6);
    for row in table {
        for cell in &row[2..] {
            assert_eq!(cell.parse::<f64>().unwrap(), 1.0);
        }
    }
}

#[test]
fn spectrum_lists_every_level() {
    let dir = tempfile::tempdir().unwrap();
    assert!(kg5d(dir.path(), &["spectrum", "--n-max", "4"]).status.success());
    let table = rows(&dir.path().join("spectrum.csv"));
    assert_eq!(table.len(), 10);
    for row in &table {
        let e: f64 = row[2].parse().unwrap();
        let inv: f64 = row[3].parse().unwrap();
        assert!(e < 1.0 && (e * inv - 1.0).abs() < 1e-15);
    }
}

#[test]
fn figure_ground_column_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    assert!(kg5d(dir.path(), &["figure1", "--n", "1,10", "--r-points", "51"]).status.success());
    let table = rows(&dir.path().join("figure1.csv"));
    assert_eq!(table.len(), 51);
    for row in table {
        let r: f64 = row[0].parse().unwrap();
        let d1: f64 = row[2].parse().unwrap();
        assert!((d1 - r * r * (-r).exp() / 2.0).abs() < 1e-14, "r = {r}");
    }
    let svg = std::fs::read_to_string(dir.path().join("figure1.svg")).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg") || svg.contains("<svg"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(&cfg, "n_max = 2\nformats = csv\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert!(kg5d(dir.path(), &["spectrum", "--config", cfg]).status.success());
    assert_eq!(rows(&dir.path().join("spectrum.csv")).len(), 3);
    assert!(!dir.path().join("spectrum.json").exists());
    assert!(kg5d(dir.path(), &["spectrum", "--config", cfg, "--n-max", "3"]).status.success());
    assert_eq!(rows(&dir.path().join("spectrum.csv")).len(), 6);
}

#[test]
fn output_directory_does_not_change_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        assert!(kg5d(dir.path(), &["partition", "--n-levels", "50"]).status.success());
    }
    for name in ["partition.json", "partition_levels.csv"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap());
    }
    assert_eq!(rows(&a.path().join("partition_levels.csv")).len(), 50);
}
