use std::path::{Path, PathBuf};
use std::process::Command;

use irsplan::config::{ExperimentConfig, SweepParam};
use irsplan::output::read_json;
use irsplan::{run, sweep, ExperimentError};

fn desk_text() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/desk.toml");
    std::fs::read_to_string(path).unwrap()
}

/// Desk config cut down to two realizations and two starts.
fn small_text() -> String {
    desk_text().replace("realizations = 4", "realizations = 2").replace(
        "starts = [[30.0, 5.0, 5.0], [35.0, 5.0, 5.0], [40.0, 5.0, 5.0], [45.0, 5.0, 5.0]]",
        "starts = [[35.0, 5.0, 5.0], [40.0, 5.0, 5.0]]",
    )
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn irsplan(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_irsplan")).args(args).output().unwrap()
}

#[test]
fn run_writes_csv_with_rate_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_text());
    let out = dir.path().join("out.csv");
    let o = irsplan(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scheme,solver,M,p_max_dbm,realization,wsr_bps_hz,s_x,s_y,s_z,iters,wall_ms,rate_1,rate_2"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("noma,ao,8,30,0,"));
    assert!(lines[2].starts_with("noma,ao,8,30,1,"));
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_text());
    let out = dir.path().join("out.json");
    let o = irsplan(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let recs = read_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(recs.len(), 2);
    for r in &recs {
        assert_eq!(r, &r.rounded());
        assert_eq!(r.rates.len(), 2);
        assert_eq!(r.reflections.len(), 1);
        assert_eq!(r.reflections[0].len(), 8);
        let sum: f64 = r.rates.iter().zip([0.4, 0.6]).map(|(a, w)| a * w).sum();
        assert!((sum - r.wsr).abs() < 1e-7);
    }
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let bad = [
        small_text().replace("weights = [0.4, 0.6]", "weights = [0.4]"),
        small_text().replace("seed = 7", "seed = 7\ncolour = 1"),
        small_text().replace("delta = 0.05", "delta = 0.2"),
        small_text().replace("m_h = 2", "m_h = 3"),
    ];
    for text in bad {
        let cfg = write_config(dir.path(), &text);
        let o = irsplan(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let o = irsplan(&["run", "--config", "/nonexistent.toml", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_override_changes_online_phase_only() {
    let cfg = ExperimentConfig::from_toml_str(&small_text()).unwrap();
    let mut other = cfg.clone();
    other.experiment.seed = 8;
    let a = run(&cfg).unwrap();
    let b = run(&other).unwrap();
    assert_ne!(a.records[0].wsr, b.records[0].wsr);
}

#[test]
fn single_value_sweep_matches_run() {
    let cfg = ExperimentConfig::from_toml_str(&small_text()).unwrap();
    let a = run(&cfg).unwrap();
    let b = sweep(&cfg, SweepParam::PMaxDbm, &[30.0]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn empty_sweep_is_a_config_error() {
    let cfg = ExperimentConfig::from_toml_str(&small_text()).unwrap();
    assert!(matches!(
        sweep(&cfg, SweepParam::PMaxDbm, &[]),
        Err(ExperimentError::Config(_))
    ));
}

#[test]
fn x_grid_sweep_pins_the_deployment() {
    let cfg = ExperimentConfig::from_toml_str(&small_text()).unwrap();
    let res = sweep(&cfg, SweepParam::XGrid, &[32.0, 44.0]).unwrap();
    assert_eq!(res.records.len(), 4);
    assert_eq!(res.records[0].s, [32.0, 5.0, 5.0]);
    assert_eq!(res.records[3].s, [44.0, 5.0, 5.0]);
    assert!(sweep(&cfg, SweepParam::XGrid, &[50.0]).is_err());
}
