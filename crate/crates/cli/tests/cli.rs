use std::path::Path;
use std::process::Command;

use rqit_cli::{parse_csv, parse_run_header, RunConfig};

fn rqit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rqit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (std::process::Output, String) {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap().to_string();
    full.extend(["--output", &path_str]);
    let out = rqit(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (out, text)
}

#[test]
fn orthogonal_encodings_at_rest_are_a_right_angle_apart() {
    let out = rqit(&["fig3", "--r", "0", "--xi", "0:0:1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = parse_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(table.columns, ["xi", "theta"]);
    assert_eq!(table.rows.len(), 1);
    assert!((table.rows[0][1] - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
}

#[test]
fn reruns_are_byte_identical_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fig2", "--r", "0.6", "--xi", "0:0.4:0.2", "--samples", "3000", "--seed", "42"];
    let path = dir.path().join("out.csv");
    let path = path.to_str().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3", "1"] {
        let status = Command::new(env!("CARGO_BIN_EXE_rqit"))
            .args(args)
            .args(["--output", path])
            .env("RQIT_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn header_carries_the_run_config() {
    let dir = tempfile::tempdir().unwrap();
    let (out, text) = run_to(dir.path(), "fig1.csv", &["fig1", "--r", "0.6", "--xi", "0:0.9:0.1"]);
    assert!(out.status.success());
    assert!(!text.contains('\r'));
    let config = parse_run_header(&text).unwrap();
    assert_eq!(config.command, rqit_cli::Command::Fig1);
    assert_eq!(config.r, 0.6);
    assert_eq!(config.xi_grid.to_string(), "0:0.9:0.1");
    assert!(config.output.is_some());
    let table = parse_csv(&text).unwrap();
    let n_max: usize = table.meta("n_max").unwrap().parse().unwrap();
    assert!(n_max >= 16);
    assert_eq!(table.columns, ["xi", "log_negativity"]);
    assert_eq!(table.rows.len(), 10);
    // Twelve significant digits in every data field.
    let data_line = text.lines().find(|l| l.starts_with("0.0")).unwrap();
    for field in data_line.split(',') {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 13, "{field}");
    }
}

#[test]
fn metadata_round_trips_through_the_config() {
    let config = rqit_cli::parse_args([
        "rqit", "curvature", "--r", "0.05", "--xi-c", "0.3:0.6:0.3", "--theta", "1:2:0.5", "--seed", "9",
    ])
    .unwrap();
    let back = RunConfig::from_metadata(&config.to_metadata()).unwrap();
    assert_eq!(back, config);
}

#[test]
fn curvature_header_records_the_h_reading() {
    let out = rqit(&["curvature", "--xi-c", "0.5:0.5:1", "--theta", "1:1:1"]);
    assert!(out.status.success());
    let table = parse_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(table.meta("h_reading"), Some("xi_c"));
    assert_eq!(table.rows.len(), 1);
}

#[test]
fn metric_rows_agree_with_the_numeric_metric() {
    let out = rqit(&["metric", "--points", "4", "--seed", "3"]);
    assert!(out.status.success());
    let table = parse_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.column("rel_discrepancy").unwrap().iter().all(|&d| d < 0.05));
}

#[test]
fn validate_passes() {
    let out = rqit(&["validate", "--samples", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn svg_is_written_next_to_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig3.svg");
    let (out, _) = run_to(
        dir.path(),
        "fig3.csv",
        &["fig3", "--xi", "0:0.9:0.3", "--svg", svg.to_str().unwrap()],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
}

#[test]
fn bad_arguments_exit_with_2() {
    for args in [
        &["fig1", "--r", "-1"][..],
        &["fig1", "--xi", "0:1.5:0.1"],
        &["fig1", "--xi", "nonsense"],
        &["fig2", "--samples", "0"],
        &["metric", "--r", "0.5"],
        &["metric", "--svg", "x.svg"],
        &["nosuchcommand"],
    ] {
        assert_eq!(rqit(args).status.code(), Some(2), "{args:?}");
    }
    let status = Command::new(env!("CARGO_BIN_EXE_rqit"))
        .args(["fig3", "--xi", "0:0:1"])
        .env("RQIT_THREADS", "zero")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn help_lists_the_columns() {
    let out = rqit(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("xi,log_negativity"));
    assert!(text.contains("xi,fidelity_mc,std_err,fidelity_exact"));
    assert!(text.contains("xi,theta"));
}

#[test]
fn numeric_failures_exit_with_3() {
    // Points on the polar axis have no polar chart.
    let out = rqit(&["curvature", "--xi-c", "0.5:0.5:1", "--theta", "0.0000001:0.0000001:1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_output_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = rqit(&["fig3", "--xi", "0:0:1", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}
