//! One function per subcommand, each producing a [`Table`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rqit_core::distinguishability::{accelerated_pair, angle_sweep, bures_angle};
use rqit_core::entanglement::{log_negativity, negativity_sweep};
use rqit_core::geometry::{
    curvature_table, metric_cartesian, numeric_metric, relative_discrepancy, scalar_curvature_numeric,
    selected_h_reading, DEFAULT_METRIC_STEP,
};
use rqit_core::teleportation::{fidelity_sweep, Teleporter};
use rqit_core::unruh::entangled_state;
use rqit_core::{AccelerationParam, BlochVector, FockCutoff, OrthogonalityParam};

use crate::config::{Command, RunConfig};
use crate::table::Table;
use crate::CliError;

/// Radius of the ball the `metric` command samples from.
pub const METRIC_SAMPLE_RADIUS: f64 = 0.7;

pub fn execute(config: &RunConfig) -> Result<Table, CliError> {
    let r = AccelerationParam::new(config.r)?;
    let mut table = match config.command {
        Command::Fig1 => fig1(config, r)?,
        Command::Fig2 => fig2(config, r)?,
        Command::Fig3 => fig3(config, r)?,
        Command::Metric => metric(config, r)?,
        Command::Curvature => curvature(config, r)?,
        Command::Validate => validate(config, r)?,
    };
    let mut metadata = vec![("rqit_version".to_string(), env!("CARGO_PKG_VERSION").to_string())];
    metadata.extend(config.to_metadata());
    metadata.append(&mut table.metadata);
    table.metadata = metadata;
    Ok(table)
}

fn cutoff(config: &RunConfig, r: AccelerationParam, table: &mut Table) -> Result<FockCutoff, CliError> {
    let cutoff = FockCutoff::for_acceleration(r, config.cutoff_tol)?;
    table.push_meta("n_max", cutoff.n_max());
    Ok(cutoff)
}

fn fig1(config: &RunConfig, r: AccelerationParam) -> Result<Table, CliError> {
    let mut table = Table::new(&["xi", "log_negativity"]);
    let cutoff = cutoff(config, r, &mut table)?;
    for p in negativity_sweep(r, &config.xi_grid.points(), cutoff)? {
        table.push_row(vec![p.xi, p.log_negativity]);
    }
    Ok(table)
}

fn fig2(config: &RunConfig, r: AccelerationParam) -> Result<Table, CliError> {
    let mut table = Table::new(&["xi", "fidelity_mc", "std_err", "fidelity_exact"]);
    let cutoff = cutoff(config, r, &mut table)?;
    for p in fidelity_sweep(r, &config.xi_grid.points(), cutoff, config.samples, config.seed)? {
        table.push_row(vec![p.xi, p.mc.mean, p.mc.std_error, p.exact]);
    }
    Ok(table)
}

fn fig3(config: &RunConfig, r: AccelerationParam) -> Result<Table, CliError> {
    let mut table = Table::new(&["xi", "theta"]);
    let cutoff = cutoff(config, r, &mut table)?;
    for p in angle_sweep(r, &config.xi_grid.points(), cutoff)? {
        table.push_row(vec![p.xi, p.theta]);
    }
    Ok(table)
}

/// Uniform points in the ball of radius [`METRIC_SAMPLE_RADIUS`], by rejection.
pub fn sample_ball(seed: u64, count: usize) -> Vec<BlochVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if v.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
            out.push(BlochVector::from_array(v.map(|c| c * METRIC_SAMPLE_RADIUS)));
        }
    }
    out
}

fn metric(config: &RunConfig, r: AccelerationParam) -> Result<Table, CliError> {
    const ENTRIES: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let mut table = Table::new(&[
        "x", "y", "z", "g_xx", "g_xy", "g_xz", "g_yy", "g_yz", "g_zz", "num_xx", "num_xy", "num_xz", "num_yy",
        "num_yz", "num_zz", "rel_discrepancy",
    ]);
    table.push_meta("step", DEFAULT_METRIC_STEP);
    table.push_meta("sample_radius", METRIC_SAMPLE_RADIUS);
    for n in sample_ball(config.seed, config.points) {
        let closed = metric_cartesian(n, r)?;
        let numeric = numeric_metric(n, r, DEFAULT_METRIC_STEP)?;
        let mut row = n.to_array().to_vec();
        row.extend(ENTRIES.iter().map(|&(i, j)| closed.tensor[(i, j)]));
        row.extend(ENTRIES.iter().map(|&(i, j)| numeric.tensor[(i, j)]));
        row.push(relative_discrepancy(&closed, &numeric));
        table.push_row(row);
    }
    Ok(table)
}

fn curvature(config: &RunConfig, r: AccelerationParam) -> Result<Table, CliError> {
    let mut table = Table::new(&["xi_c", "theta", "numeric_R", "paper_R", "discrepancy"]);
    table.push_meta("h_reading", selected_h_reading().label());
    for p in curvature_table(r, &config.xi_c_grid.points(), &config.theta_grid.points())? {
        table.push_row(vec![p.xi_c, p.theta, p.numeric_r, p.paper_r, p.discrepancy]);
    }
    Ok(table)
}

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
}

fn validate(config: &RunConfig, r: AccelerationParam) -> Result<Table, CliError> {
    let rest = AccelerationParam::INERTIAL;
    let rest_cutoff = FockCutoff::for_acceleration(rest, config.cutoff_tol)?;
    let mut table = Table::new(&["check", "value", "threshold", "pass"]);
    let cutoff = cutoff(config, r, &mut table)?;
    let half = OrthogonalityParam::new(0.5)?;
    let mut checks = Vec::new();

    let bell = log_negativity(&entangled_state(OrthogonalityParam::ORTHOGONAL, rest, rest_cutoff)?, 0)?;
    checks.push(Check {
        name: "bell_log_negativity_error",
        value: (bell - 1.0).abs(),
        threshold: 1e-10,
    });

    let (plus, phi) = accelerated_pair(OrthogonalityParam::ORTHOGONAL, rest, rest_cutoff)?;
    checks.push(Check {
        name: "orthogonal_angle_error",
        value: (bures_angle(&plus, &phi)? - std::f64::consts::FRAC_PI_2).abs(),
        threshold: 1e-10,
    });

    let coarse = log_negativity(&entangled_state(half, r, cutoff)?, 0)?;
    let fine = log_negativity(&entangled_state(half, r, cutoff.doubled())?, 0)?;
    checks.push(Check {
        name: "cutoff_doubling_change",
        value: (coarse - fine).abs(),
        threshold: 1e-9,
    });

    let tele = Teleporter::new(half, r, cutoff)?;
    let mc = tele.average_fidelity_mc(config.samples, config.seed)?;
    checks.push(Check {
        name: "fidelity_mc_deviation_in_std_err",
        value: (mc.mean - tele.average_fidelity_exact()).abs() / mc.std_error.max(f64::MIN_POSITIVE),
        threshold: 5.0,
    });

    let small = AccelerationParam::new(0.05)?;
    let n = BlochVector::new(0.1, 0.2, 0.3);
    checks.push(Check {
        name: "metric_relative_discrepancy",
        value: relative_discrepancy(&metric_cartesian(n, small)?, &numeric_metric(n, small, DEFAULT_METRIC_STEP)?),
        threshold: 0.05,
    });

    checks.push(Check {
        name: "rest_curvature_error",
        value: (scalar_curvature_numeric(0.5, 1.0, rest)? - 24.0).abs(),
        threshold: 1e-3,
    });

    for (k, check) in checks.iter().enumerate() {
        table.push_meta(&format!("check.{}", k + 1), check.name);
        let pass = check.value <= check.threshold;
        table.push_row(vec![(k + 1) as f64, check.value, check.threshold, f64::from(u8::from(pass))]);
    }
    Ok(table)
}

/// Number of failed rows in a `validate` table.
pub fn failed_checks(table: &Table) -> usize {
    table
        .column("pass")
        .map(|col| col.iter().filter(|&&p| p != 1.0).count())
        .unwrap_or(0)
}

/// Which columns the SVG plots for each figure.
pub fn plot_columns(command: Command) -> &'static [usize] {
    match command {
        Command::Fig2 => &[1, 3],
        _ => &[1],
    }
}
