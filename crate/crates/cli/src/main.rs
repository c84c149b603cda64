//! `zetaperiod` command-line driver.

mod commands;
mod input;
mod output;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "zetaperiod", version, about = "Zeta-polynomials of newforms from critical L-values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline for one newform: L-values, R_f, Z_f by both routes, roots, checks.
    Analyze(SourceArgs),
    /// Roots of R_f and Z_f for one newform.
    Roots(SourceArgs),
    /// Coefficients of H_k^± and their zeros by the cotangent-sum solver and the root finder.
    Hk(CommonArgs),
    /// Lattice-point counts of the cross-simplex against H_k^-(m).
    Ehrhart(CommonArgs),
    /// Distance of Z_f roots from the limiting H_k^±(-s) roots across a family.
    Convergence(FamilyArgs),
    /// Run the acceptance checks.
    Selftest(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Weight k.
    #[arg(long)]
    pub weight: Option<u32>,
    /// Sign of the functional equation, 1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<i64>,
    /// Level N, needed for CSV input.
    #[arg(long)]
    pub level: Option<u64>,
    /// Relative precision of the critical values, in [1e-14, 1e-6].
    #[arg(long, default_value_t = zetaperiod::DEFAULT_PRECISION)]
    pub precision: f64,
    /// Output formats.
    #[arg(long, value_delimiter = ',', default_value = "json")]
    pub emit: Vec<Emit>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
    /// Largest dilation for `ehrhart`.
    #[arg(long, default_value_t = 5)]
    pub max_dilate: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// `delta` or a newform file (.json, or .csv with --weight/--level).
    pub source: Option<String>,
    /// Newform file; alternative to the positional source.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Newform files; defaults to the bundled forms of the given weight and sign.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let code = commands::run(&cli.command);
    eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
