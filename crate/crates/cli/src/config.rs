//! Command-line arguments and their round trip through CSV metadata.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rqit_core::Grid;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Logarithmic negativity vs xi. Columns: xi,log_negativity
    Fig1,
    /// Average teleportation fidelity vs xi. Columns: xi,fidelity_mc,std_err,fidelity_exact
    Fig2,
    /// Bures angle between the encodings vs xi. Columns: xi,theta
    Fig3,
    /// Closed-form vs numerically recovered metric at random Bloch points.
    /// Columns: x,y,z,g_xx,g_xy,g_xz,g_yy,g_yz,g_zz,num_xx,num_xy,num_xz,num_yy,num_yz,num_zz,rel_discrepancy
    Metric,
    /// Scalar curvature on a (xi_c, theta) grid.
    /// Columns: xi_c,theta,numeric_R,paper_R,discrepancy
    Curvature,
    /// Quick self-checks. Columns: check,value,threshold,pass
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Metric => "metric",
            Self::Curvature => "curvature",
            Self::Validate => "validate",
        }
    }

    /// Acceleration used when `--r` is not given.
    pub fn default_r(self) -> f64 {
        match self {
            Self::Fig1 | Self::Fig2 | Self::Validate => 0.6,
            Self::Fig3 => 0.85,
            Self::Metric => 0.05,
            Self::Curvature => 0.1,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Self as ValueEnum>::from_str(s, false).map_err(|_| CliError::Usage(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Parser)]
#[command(name = "rqit", version, about = "Unruh-channel sweeps and state-space geometry as CSV")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Logarithmic negativity vs xi. Columns: xi,log_negativity
    Fig1(CommonArgs),
    /// Average teleportation fidelity vs xi. Columns: xi,fidelity_mc,std_err,fidelity_exact
    Fig2(CommonArgs),
    /// Bures angle between the encodings vs xi. Columns: xi,theta
    Fig3(CommonArgs),
    /// Closed-form vs numerically recovered metric at random Bloch points.
    /// Columns: x,y,z, closed-form g_ij, numeric num_ij, rel_discrepancy
    Metric(CommonArgs),
    /// Scalar curvature on a (xi_c, theta) grid. Columns: xi_c,theta,numeric_R,paper_R,discrepancy
    Curvature(CommonArgs),
    /// Quick self-checks. Columns: check,value,threshold,pass
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Acceleration parameter r (default depends on the command)
    #[arg(long)]
    pub r: Option<f64>,
    /// Orthogonality grid min:max:step
    #[arg(long, default_value = "0:0.95:0.01")]
    pub xi: Grid,
    /// Fock truncation tolerance
    #[arg(long, default_value_t = 1e-12)]
    pub cutoff_tol: f64,
    /// Monte-Carlo samples (fig2)
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// RNG seed (fig2, metric)
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Radial grid min:max:step (curvature)
    #[arg(long, default_value = "0.2:0.8:0.15")]
    pub xi_c: Grid,
    /// Polar-angle grid min:max:step (curvature)
    #[arg(long, default_value = "0.4:2.6:0.55")]
    pub theta: Grid,
    /// Number of random Bloch points (metric)
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// CSV destination; standard output when absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write an SVG line plot here (fig1, fig2, fig3)
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

/// Everything that determines a run's output.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub r: f64,
    pub xi_grid: Grid,
    pub cutoff_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub xi_c_grid: Grid,
    pub theta_grid: Grid,
    pub points: usize,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Largest acceleration accepted on the command line. Fock cutoffs grow like
/// `1/(1 − tanh r)` and become impractical beyond this.
pub const MAX_R: f64 = 3.0;

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, args) = match cli.command {
            CliCommand::Fig1(a) => (Command::Fig1, a),
            CliCommand::Fig2(a) => (Command::Fig2, a),
            CliCommand::Fig3(a) => (Command::Fig3, a),
            CliCommand::Metric(a) => (Command::Metric, a),
            CliCommand::Curvature(a) => (Command::Curvature, a),
            CliCommand::Validate(a) => (Command::Validate, a),
        };
        let config = Self {
            command,
            r: args.r.unwrap_or(command.default_r()),
            xi_grid: args.xi,
            cutoff_tol: args.cutoff_tol,
            samples: args.samples,
            seed: args.seed,
            xi_c_grid: args.xi_c,
            theta_grid: args.theta,
            points: args.points,
            output: args.output,
            svg: args.svg,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if !(self.r.is_finite() && (0.0..=MAX_R).contains(&self.r)) {
            return usage(format!("--r must lie in [0, {MAX_R}], got {}", self.r));
        }
        if self.command == Command::Metric && self.r > rqit_core::unruh::SMALL_R_LIMIT {
            return usage(format!(
                "metric needs --r <= {}, got {}",
                rqit_core::unruh::SMALL_R_LIMIT,
                self.r
            ));
        }
        if !(self.cutoff_tol > 0.0 && self.cutoff_tol < 1.0) {
            return usage(format!("--cutoff-tol must lie in (0, 1), got {}", self.cutoff_tol));
        }
        self.xi_grid
            .check_within(0.0, 1.0, "xi")
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if self.samples == 0 {
            return usage("--samples must be at least 1".into());
        }
        if self.command == Command::Metric && self.points == 0 {
            return usage("--points must be at least 1".into());
        }
        if self.command == Command::Curvature {
            let limit = rqit_core::geometry::BOUNDARY_LIMIT;
            if self.xi_c_grid.min <= 0.0 || self.xi_c_grid.max > limit {
                return usage(format!("--xi-c grid must lie in (0, {limit}]"));
            }
            if self.theta_grid.min <= 0.0 || self.theta_grid.max >= std::f64::consts::PI {
                return usage("--theta grid must lie in (0, pi)".into());
            }
        }
        if self.svg.is_some() && !matches!(self.command, Command::Fig1 | Command::Fig2 | Command::Fig3) {
            return usage(format!("--svg is only available for fig1, fig2 and fig3, not {}", self.command));
        }
        Ok(())
    }

    /// `key=value` pairs written at the top of every CSV.
    pub fn to_metadata(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("command".to_string(), self.command.to_string()),
            ("r".to_string(), self.r.to_string()),
            ("xi".to_string(), self.xi_grid.to_string()),
            ("cutoff_tol".to_string(), format!("{:e}", self.cutoff_tol)),
            ("samples".to_string(), self.samples.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("xi_c".to_string(), self.xi_c_grid.to_string()),
            ("theta".to_string(), self.theta_grid.to_string()),
            ("points".to_string(), self.points.to_string()),
        ];
        if let Some(path) = &self.output {
            out.push(("output".to_string(), path.display().to_string()));
        }
        if let Some(path) = &self.svg {
            out.push(("svg".to_string(), path.display().to_string()));
        }
        out
    }

    /// Rebuilds a config from CSV metadata. Keys the config does not own
    /// (such as `n_max`) are ignored; missing keys take command defaults.
    pub fn from_metadata(pairs: &[(String, String)]) -> Result<Self, CliError> {
        let get = |key: &str| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let command: Command = get("command")
            .ok_or_else(|| CliError::Parse("metadata has no command".into()))?
            .parse()?;
        fn field<T: FromStr>(raw: Option<&str>, key: &str, default: T) -> Result<T, CliError>
        where
            T::Err: fmt::Display,
        {
            match raw {
                None => Ok(default),
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|e| CliError::Parse(format!("metadata {key}={v:?}: {e}"))),
            }
        }
        let config = Self {
            command,
            r: field(get("r"), "r", command.default_r())?,
            xi_grid: field(get("xi"), "xi", Grid::default_xi())?,
            cutoff_tol: field(get("cutoff_tol"), "cutoff_tol", 1e-12)?,
            samples: field(get("samples"), "samples", 200_000)?,
            seed: field(get("seed"), "seed", 42)?,
            xi_c_grid: field(get("xi_c"), "xi_c", Grid::new(0.2, 0.8, 0.15).expect("default grid"))?,
            theta_grid: field(get("theta"), "theta", Grid::new(0.4, 2.6, 0.55).expect("default grid"))?,
            points: field(get("points"), "points", 20)?,
            output: get("output").map(PathBuf::from),
            svg: get("svg").map(PathBuf::from),
        };
        config.validate().map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(config)
    }
}
