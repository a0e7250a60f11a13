//! Command-line front end for `gmp-core`.
//!
//! Every flag can also come from a JSON config file (`--config`) whose keys
//! mirror the flag names; flags given on the command line win. Output is JSON
//! by default, CSV on request.
//!
//! Exit status: 0 success, 1 domain or runtime error, 2 failed verification,
//! 3 usage error.

mod commands;
mod output;
mod plot;

pub use output::{Document, Preferred, Table};
pub use plot::emit_plot_data;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmp_core::{Direction, GmpError, GmpModel, PhysicalParams};
use serde::Deserialize;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Bound levels of the model.
    Spectrum,
    /// Tabulated normalized eigenfunction of level --n.
    Wavefunction,
    /// One ladder operator applied to level --n.
    Ladder,
    /// Chain of --steps satellite potentials along --direction.
    Satellite,
    /// Poschl-Teller images of the levels, or the count for --m1/--m2.
    Ptp,
    /// Superpartner, its levels and the normalization recursion.
    Susy,
    /// Overlap of level --n with a second state.
    Fcf,
    /// Least-squares fit of (D, a, re) to the levels in --levels.
    Fit,
    /// Invariant suite of every module; prints a pass/fail table.
    Verify,
    /// CSV plot data: potential comparison, or satellite chain with --direction.
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command. All optional here; each command checks
/// what it needs.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Command, when given in a config file.
    #[arg(skip)]
    pub command: Option<Command>,

    /// Dimensionless depth k = 2 mu D / (a hbar)^2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Shape parameter b = exp(a re) - 1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Well depth D (physical input; excludes --k/--b).
    #[arg(long = "D", global = true, allow_hyphen_values = true)]
    #[serde(rename = "D")]
    pub depth: Option<f64>,
    /// Inverse range a.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Equilibrium separation re.
    #[arg(long = "re", global = true, allow_hyphen_values = true)]
    #[serde(rename = "re")]
    pub r_e: Option<f64>,
    /// Reduced mass (default 1; physical input only).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Planck constant (default 1; physical input only).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hbar: Option<f64>,

    /// Level index.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Ladder direction: g+, g-, m+ or m-.
    #[arg(long, global = true)]
    pub direction: Option<String>,
    /// Number of satellite steps.
    #[arg(long, global = true)]
    pub steps: Option<usize>,

    /// Second state for fcf: level index.
    #[arg(long, global = true)]
    pub n2: Option<usize>,
    /// Second state for fcf: k of its model.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    /// Second state for fcf: b of its model.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b2: Option<f64>,

    /// Poschl-Teller |m1| for a direct count.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m1: Option<f64>,
    /// Poschl-Teller |m2| for a direct count.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m2: Option<f64>,

    /// Observed levels for fit: JSON ([{n, energy}] or spectrum output) or CSV (n,energy).
    #[arg(long, global = true)]
    pub levels: Option<PathBuf>,
    /// Iteration cap per simplex run for fit.
    #[arg(long = "max-iterations", global = true)]
    #[serde(rename = "max-iterations", alias = "max_iterations")]
    pub max_iterations: Option<usize>,

    /// Table / plot sample count, or Numerov grid size.
    #[arg(long = "grid-points", global = true)]
    #[serde(rename = "grid-points", alias = "grid_points")]
    pub grid_points: Option<usize>,
    /// Quadrature tolerance (fcf) or simplex tolerance (fit).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Invariant suite for verify: core, wavefunction, algebra, susyqm, numerics, all.
    #[arg(long, global = true)]
    pub suite: Option<String>,

    /// Output format (json unless the command says otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($field:ident),+ $(,)?) => {
        Options { $($field: $top.$field.or($base.$field)),+ }
    };
}

impl Options {
    /// `self` wins field by field; `base` fills the gaps.
    pub fn over(self, base: Options) -> Options {
        overlay!(
            self,
            base,
            command,
            k,
            b,
            depth,
            a,
            r_e,
            mu,
            hbar,
            n,
            direction,
            steps,
            n2,
            k2,
            b2,
            m1,
            m2,
            levels,
            max_iterations,
            grid_points,
            tol,
            suite,
            format,
            out,
        )
    }

    pub fn from_json(text: &str) -> Result<Options, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gmp",
    version,
    about = "Generalized Morse potential: spectra, ladder algebra, SUSY partners, overlaps and fits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// JSON file mirroring the flags; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub options: Options,
}

/// Either parametrization of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelInput {
    Dimensionless(GmpModel),
    Physical(PhysicalParams),
}

impl ModelInput {
    pub fn model(&self) -> Result<GmpModel, GmpError> {
        match self {
            ModelInput::Dimensionless(m) => Ok(*m),
            ModelInput::Physical(p) => p.reduce(),
        }
    }

    pub fn params(&self) -> Option<&PhysicalParams> {
        match self {
            ModelInput::Physical(p) => Some(p),
            ModelInput::Dimensionless(_) => None,
        }
    }
}

/// A validated invocation: one command, at most one model input, options.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<ModelInput>,
    pub options: Options,
}

impl RunConfig {
    pub fn new(command: Command, options: Options) -> Result<Self, CliError> {
        let o = &options;
        let dimensionless = o.k.is_some() || o.b.is_some();
        let physical = o.depth.is_some() || o.a.is_some() || o.r_e.is_some();
        let model = match (dimensionless, physical) {
            (true, true) => {
                return Err(CliError::Usage(
                    "--k/--b and --D/--a/--re are mutually exclusive".into(),
                ))
            }
            (true, false) => {
                if o.mu.is_some() || o.hbar.is_some() {
                    return Err(CliError::Usage(
                        "--mu/--hbar only apply to --D/--a/--re".into(),
                    ));
                }
                let (Some(k), Some(b)) = (o.k, o.b) else {
                    return Err(CliError::Usage("--k and --b must be given together".into()));
                };
                Some(ModelInput::Dimensionless(GmpModel::new(k, b)?))
            }
            (false, true) => {
                let (Some(d), Some(a), Some(re)) = (o.depth, o.a, o.r_e) else {
                    return Err(CliError::Usage(
                        "--D, --a and --re must be given together".into(),
                    ));
                };
                let p = PhysicalParams::with_units(
                    d,
                    a,
                    re,
                    o.mu.unwrap_or(1.0),
                    o.hbar.unwrap_or(1.0),
                )?;
                Some(ModelInput::Physical(p))
            }
            (false, false) => None,
        };
        if let Some(d) = &o.direction {
            parse_direction(d)?;
        }
        Ok(Self {
            command,
            model,
            options,
        })
    }

    pub fn model(&self) -> Result<GmpModel, CliError> {
        match &self.model {
            Some(m) => Ok(m.model()?),
            None => Err(CliError::Usage(
                "this command needs a model: --k --b or --D --a --re".into(),
            )),
        }
    }

    pub fn params(&self) -> Option<&PhysicalParams> {
        self.model.as_ref().and_then(ModelInput::params)
    }

    pub fn direction(&self) -> Result<Option<Direction>, CliError> {
        self.options
            .direction
            .as_deref()
            .map(parse_direction)
            .transpose()
    }
}

fn parse_direction(s: &str) -> Result<Direction, CliError> {
    s.parse().map_err(CliError::Usage)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] GmpError),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0} check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Model(_) | CliError::Io(_) => EXIT_DOMAIN,
            CliError::VerifyFailed(_) => EXIT_VERIFY,
        }
    }
}

/// Runs the command and writes its result to `out` (or to `--out`).
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = commands::dispatch(config)?;
    match &config.options.out {
        Some(path) => {
            let mut file = fs::File::create(path).map_err(|e| io_error(path, e))?;
            render(&doc, config.options.format, &mut file).map_err(|e| io_error(path, e))?;
        }
        None => match render(&doc, config.options.format, out) {
            // a closed reader (e.g. `| head`) is not a failure of the command
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                return Err(CliError::Io(e.to_string()))
            }
            _ => {}
        },
    }
    if doc.failures > 0 {
        return Err(CliError::VerifyFailed(doc.failures));
    }
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn render(doc: &Document, format: Option<Format>, out: &mut dyn Write) -> std::io::Result<()> {
    let preferred = match format {
        Some(Format::Json) => Preferred::Json,
        Some(Format::Csv) => Preferred::Csv,
        None => doc.preferred,
    };
    match (preferred, &doc.text) {
        (Preferred::Text, Some(text)) => writeln!(out, "{text}"),
        (Preferred::Csv, _) => doc.csv.write_to(out),
        _ => {
            serde_json::to_writer_pretty(&mut *out, &doc.json)?;
            writeln!(out)
        }
    }
}

/// Parses `--config`, merges it under the flags and builds the run.
pub fn config_from_cli(cli: Cli) -> Result<RunConfig, CliError> {
    let base = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))?;
            Options::from_json(&text)?
        }
        None => Options::default(),
    };
    let options = cli.options.over(base);
    let command = cli
        .command
        .or(options.command)
        .ok_or_else(|| CliError::Usage("no command given (try --help)".into()))?;
    RunConfig::new(command, options)
}

/// Full entry point: parses `args`, runs, reports errors, returns the exit status.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    match config_from_cli(cli).and_then(|cfg| run(&cfg, stdout)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "gmp: {e}");
            e.exit_code()
        }
    }
}
