//! The `otlab` command line: instance generation, exact solving,
//! triangle-inequality certificates, scalar checks and benchmarks.
//!
//! Exit codes: 0 on success, 1 when a certificate fails, 2 on bad input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod error;
pub mod instance;
pub mod report;

pub use error::{CliError, EXIT_FAILED, EXIT_INPUT, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "otlab", version, about = "Exact optimal transport on finite metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random instance file.
    Gen(GenArgs),
    /// Solve the transport problem between two measures of an instance.
    Solve(SolveArgs),
    /// Certify the triangle inequality for three measures of an instance.
    Certify(CertifyArgs),
    /// Evaluate the scalar inequality behind the certificate.
    Scalar(ScalarArgs),
    /// Time the solver or the certificate over a grid of sizes and seeds.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Euclidean,
    RandomMetric,
    DiracTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightMode {
    /// Random weights, about one point in five left out of each support.
    Random,
    /// Uniform on a random half of the points, the shape the oracle accepts.
    Uniform,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Number of points (ignored for dirac-triple).
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Dimension of euclidean clouds.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, env = "OTLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Collinear coordinates of the dirac-triple points.
    #[arg(long, value_delimiter = ',', default_value = "0,1,3", allow_hyphen_values = true)]
    pub coords: Vec<f64>,
    #[arg(long, value_enum, default_value_t = WeightMode::Random)]
    pub weights: WeightMode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Two measure names; defaults to the first two in the file.
    #[arg(long, value_delimiter = ',')]
    pub measures: Vec<String>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Cross-check against the permutation oracle (uniform supports only).
    #[arg(long)]
    pub oracle: bool,
    /// Allowed difference between the solver and the oracle.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Duality,
    Glueing,
    Both,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Three measure names; defaults to the first three in the file.
    #[arg(long, value_delimiter = ',')]
    pub measures: Vec<String>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = Route::Both)]
    pub route: Route,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Pretty,
    Csv,
}

#[derive(Debug, Args)]
pub struct ScalarArgs {
    #[command(subcommand)]
    pub sub: ScalarCommand,
}

#[derive(Debug, Args)]
pub struct ScalarCommon {
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Pretty)]
    pub format: TableFormat,
    /// Also write a TOML report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ScalarCommand {
    /// The optimal coefficient f(eta), its critical point and a grid search.
    FEta {
        #[command(flatten)]
        common: ScalarCommon,
        #[arg(long)]
        eta: f64,
        /// Points in the brute-force grid.
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Scan (X, Y) on a logarithmic grid for violations of the inequality.
    CheckLemma2 {
        #[command(flatten)]
        common: ScalarCommon,
        #[arg(long)]
        eta: f64,
        /// Points per axis over [1e-3, 1e3].
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Residual of the identity that collapses the weighted bound.
    Collapse {
        #[command(flatten)]
        common: ScalarCommon,
        /// A single ratio Z; without it a grid over [1e-3, 1e3] is scanned.
        #[arg(long = "z", visible_alias = "Z")]
        z: Option<f64>,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Solve,
    Certify,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, value_delimiter = ',', default_value = "10,50,100")]
    pub sizes: Vec<usize>,
    /// `a..b` (inclusive) or a comma list.
    #[arg(long, default_value = "1..5")]
    pub seeds: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` and runs the command, mapping the outcome to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => commands::gen::run(&a),
        Command::Solve(a) => commands::solve::run(&a),
        Command::Certify(a) => commands::certify::run(&a),
        Command::Scalar(a) => commands::scalar::run(&a),
        Command::Bench(a) => commands::bench::run(&a),
    };
    match outcome {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("otlab: {e}");
            e.exit_code()
        }
    }
}
