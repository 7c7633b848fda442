//! Command-line surface and its resolution into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use epr_dds_core::{AsymParams, ThetaParams};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "epr-dds",
    version,
    about = "Gaussian double-double-slit model: densities, visibility scans, screen-hit sampling, purification and n-path measures",
    allow_negative_numbers = true
)]
pub struct Cli {
    /// Print a machine-readable description of the command (or subcommand) and exit.
    #[arg(long = "help-json", global = true)]
    pub help_json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Far-field momentum density on a fringe-aligned grid.
    #[command(allow_negative_numbers = true)]
    Density(DensityArgs),
    /// Sweep theta over [0, pi/4]: visibility, predictability and P^2 + V^2.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Seeded Monte Carlo screen hits plus a fitted visibility.
    #[command(allow_negative_numbers = true)]
    Sample(SampleArgs),
    /// Find the theta state with Alice's statistics of an asymmetric state.
    #[command(allow_negative_numbers = true)]
    Purify(PurifyArgs),
    /// Distinguishability, predictability and coherence of n paths.
    #[command(allow_negative_numbers = true)]
    Multipath(MultipathArgs),
    /// Run every acceptance check and report pass/fail as JSON.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

/// One state family: `--h --theta` or `--h1 --b --h2`, both with `--a`.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Alice's Gaussian width parameter a (inverse length squared).
    #[arg(long)]
    pub a: f64,
    /// Slit half-separation of the symmetric family.
    #[arg(long)]
    pub h: Option<f64>,
    /// Entanglement angle in [0, pi/4] (radians).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Alice's slit half-separation (asymmetric family).
    #[arg(long)]
    pub h1: Option<f64>,
    /// Bob's Gaussian width parameter (asymmetric family).
    #[arg(long)]
    pub b: Option<f64>,
    /// Bob's slit half-separation (asymmetric family).
    #[arg(long)]
    pub h2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Grid points per momentum axis (rounded up to odd so that p = 0 is a node).
    #[arg(long, default_value_t = 401)]
    pub grid_points: usize,
    /// Grid half-width in momentum sigmas (sqrt(a)).
    #[arg(long, default_value_t = 6.0)]
    pub range_sigmas: f64,
    /// Emit the joint density over (p1, p2) instead of Alice's marginal.
    #[arg(long)]
    pub joint: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Gaussian width parameter a.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Slit half-separation h.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Number of theta rows, endpoints included.
    #[arg(long, default_value_t = 400)]
    pub grid_points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Number of screen hits.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    /// Master seed.
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; never changes the output.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Where to write the JSON fit summary; standard output when --out is set,
    /// standard error otherwise.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PurifyArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub h1: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub h2: f64,
    /// Points per axis of the Wigner comparison grid.
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MultipathArgs {
    /// JSON file `{"amplitudes_sq": [...], "overlaps": [[...], ...]}`; `-` reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Worker counts compared by the Monte Carlo invariance check.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4])]
    pub workers: Vec<usize>,
    /// Only run these criteria (comma separated, 1-9).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated parameter set of either family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Theta(ThetaParams),
    Asym(AsymParams),
}

impl Family {
    pub fn provenance(&self) -> Vec<(&'static str, String)> {
        match self {
            Self::Theta(p) => vec![
                ("family", "theta".into()),
                ("a", p.a().to_string()),
                ("h", p.h().to_string()),
                ("theta", p.theta().to_string()),
            ],
            Self::Asym(p) => vec![
                ("family", "asym".into()),
                ("a", p.a().to_string()),
                ("h1", p.h1().to_string()),
                ("b", p.b().to_string()),
                ("h2", p.h2().to_string()),
            ],
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Theta(p) => json!({"family": "theta", "a": p.a(), "h": p.h(), "theta": p.theta()}),
            Self::Asym(p) => json!({"family": "asym", "a": p.a(), "h1": p.h1(), "b": p.b(), "h2": p.h2()}),
        }
    }
}

impl StateArgs {
    pub fn family(&self) -> CliResult<Family> {
        let theta_family = (self.h, self.theta);
        let asym_family = (self.h1, self.b, self.h2);
        match (theta_family, asym_family) {
            ((Some(h), Some(theta)), (None, None, None)) => Ok(Family::Theta(ThetaParams::new(self.a, h, theta)?)),
            ((None, None), (Some(h1), Some(b), Some(h2))) => Ok(Family::Asym(AsymParams::new(self.a, h1, b, h2)?)),
            _ => Err(CliError::Usage(
                "give exactly one state family: --a --h --theta, or --a --h1 --b --h2".into(),
            )),
        }
    }
}

/// Density grid settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub range_sigmas: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Density,
    Scan,
    Sample,
    Purify,
    Multipath,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Density => "density",
            Self::Scan => "scan",
            Self::Sample => "sample",
            Self::Purify => "purify",
            Self::Multipath => "multipath",
            Self::Verify => "verify",
        }
    }
}

/// Settings shared by the data-producing subcommands, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub family: Option<Family>,
    pub grid: Option<GridSpec>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn for_density(args: &DensityArgs) -> CliResult<Self> {
        if args.grid_points < 3 {
            return Err(CliError::Usage("--grid-points must be at least 3".into()));
        }
        if !(args.range_sigmas.is_finite() && args.range_sigmas > 0.0) {
            return Err(CliError::Usage("--range-sigmas must be positive".into()));
        }
        Ok(Self {
            command: CommandKind::Density,
            family: Some(args.state.family()?),
            grid: Some(GridSpec {
                points: args.grid_points | 1,
                range_sigmas: args.range_sigmas,
            }),
            seed: None,
            out: args.output.out.clone(),
            format: args.output.format,
        })
    }

    pub fn for_sample(args: &SampleArgs) -> CliResult<Self> {
        if args.n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if args.workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(Self {
            command: CommandKind::Sample,
            family: Some(args.state.family()?),
            grid: None,
            seed: Some(args.seed),
            out: args.output.out.clone(),
            format: args.output.format,
        })
    }
}

/// `--help-json` payload for the top level, or for `subcommand` if given.
pub fn help_json(subcommand: Option<&str>) -> Value {
    let root = Cli::command();
    let describe = |cmd: &clap::Command| {
        let args: Vec<Value> = cmd
            .get_arguments()
            .filter(|a| !matches!(a.get_id().as_str(), "help" | "version"))
            .map(|a| {
                json!({
                    "name": a.get_id().as_str(),
                    "long": a.get_long(),
                    "help": a.get_help().map(|h| h.to_string()),
                    "required": a.is_required_set(),
                    "takes_value": a.get_action().takes_values(),
                    "default": a.get_default_values().iter().map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>(),
                    "possible_values": a.get_possible_values().iter().map(|v| v.get_name().to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "name": cmd.get_name(),
            "about": cmd.get_about().map(|s| s.to_string()),
            "arguments": args,
        })
    };
    match subcommand.and_then(|name| root.find_subcommand(name)) {
        Some(cmd) => {
            let mut v = describe(cmd);
            v["schema"] = json!(crate::output::SCHEMA);
            v
        }
        None => json!({
            "schema": crate::output::SCHEMA,
            "name": root.get_name(),
            "version": root.get_version(),
            "about": root.get_about().map(|s| s.to_string()),
            "exit_codes": {"0": "success", "1": "internal error or failed check", "2": "usage or validation error"},
            "subcommands": root.get_subcommands().map(describe).collect::<Vec<_>>(),
        }),
    }
}
