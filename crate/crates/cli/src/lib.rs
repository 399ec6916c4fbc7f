//! The `imeans` command line: argument parsing, dispatch and exit codes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use invariant_means::rational::parse_rational;
use invariant_means::{Error, Rational, SearchMode};

mod commands;
mod input;
mod render;

pub use render::{Format, Output};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitReport {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub format: Format,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Input(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Parse { .. }) | CliError::Input(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Lib(Error::Invariant(_)) => EXIT_INVARIANT,
            CliError::Lib(_) => EXIT_UNSUPPORTED,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Input(m) => format!("cannot read input: {m}"),
            CliError::Usage(m) => m.clone(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "imeans", version, about = "Means and densities on finitely generated abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Uppermost and lowest density of a set.
    Density(InputArgs),
    /// Lowest mean, uppermost mean and mediality of a function.
    Mean(MeanArgs),
    /// Packing number p(k).
    Pack(PackArgs),
    /// Covering number c(k).
    Cover(PackArgs),
    /// Witness criterion for a family of finite sets.
    Witness(WitnessArgs),
    /// Box tile with small expansion against a finite set.
    Tile(TileArgs),
    /// Perturbation and commarginality of two sets of integers.
    Commarginal(CommarginalArgs),
    /// Seeded property suite for the mean axioms.
    Axioms(AxiomArgs),
    /// Asymptotic density profile on the integers.
    Envelope(InputArgs),
    /// Round a function with values in [0, 1] to a set.
    Round(RoundArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Description file (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct MeanArgs {
    #[arg(long)]
    input: PathBuf,
    /// Precision 1/k of the mediality witness.
    #[arg(long, default_value_t = 16)]
    k: u64,
    /// Also solve the minimax weights on the box of this side.
    #[arg(long)]
    depth: Option<i64>,
    /// Duality gap tolerance for approximate minimax.
    #[arg(long, value_parser = rational_arg, default_value = "1/100")]
    tol: Rational,
}

#[derive(Debug, Args)]
struct PackArgs {
    #[arg(long)]
    input: PathBuf,
    /// Number of translates.
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = mode_arg, default_value = "exact")]
    mode: SearchMode,
    /// Report p(j)/j for every j up to k instead of a single value.
    #[arg(long)]
    curve: bool,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    /// Document with `group`, `T` and an optional `family`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = rational_arg, default_value = "1/100")]
    tol: Rational,
    /// Number of family members to examine.
    #[arg(long, default_value_t = 200)]
    depth: i64,
}

#[derive(Debug, Args)]
struct TileArgs {
    /// Document with `group` and `B`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
}

#[derive(Debug, Args)]
struct CommarginalArgs {
    #[arg(long)]
    input: PathBuf,
    /// Description of the second set.
    #[arg(long)]
    other: PathBuf,
    /// Horizon for the counting discrepancy.
    #[arg(long, default_value_t = 100)]
    horizon: i64,
    /// Verification window [-window, window] for finite witnesses.
    #[arg(long, default_value_t = 50)]
    window: i64,
}

#[derive(Debug, Args)]
struct AxiomArgs {
    #[arg(long, default_value = "uppermost")]
    functional: String,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct RoundArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn mode_arg(s: &str) -> Result<SearchMode, String> {
    s.parse::<SearchMode>().map_err(|e| e.to_string())
}

/// Runs one invocation. `argv` starts with the subcommand.
pub fn run_command<I, S>(argv: I) -> ExitReport
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("imeans".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let (stdout, stderr) = if code == EXIT_OK { (text, String::new()) } else { (String::new(), text) };
            return ExitReport {
                code,
                stdout,
                stderr,
                format: Format::Table,
            };
        }
    };
    let format = cli.format;
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))
            .and_then(|pool| pool.install(|| dispatch(cli.command))),
        None => dispatch(cli.command),
    };
    match result {
        Ok(out) => ExitReport {
            code: EXIT_OK,
            stdout: out.render(format),
            stderr: String::new(),
            format,
        },
        Err(e) => ExitReport {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
            format,
        },
    }
}

fn dispatch(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Density(a) => commands::density(&a.input),
        Command::Mean(a) => commands::mean(&a.input, a.k, a.depth, &a.tol),
        Command::Pack(a) => commands::pack(&a.input, a.k, a.mode, a.curve, false),
        Command::Cover(a) => commands::pack(&a.input, a.k, a.mode, a.curve, true),
        Command::Witness(a) => commands::witness(&a.input, &a.tol, a.depth),
        Command::Tile(a) => commands::tile(&a.input, &a.eps),
        Command::Commarginal(a) => commands::commarginal(&a.input, &a.other, a.horizon, a.window),
        Command::Axioms(a) => commands::axioms(&a.functional, a.cases, a.seed),
        Command::Envelope(a) => commands::envelope(&a.input),
        Command::Round(a) => commands::round(&a.input, &a.eps),
    }
}
