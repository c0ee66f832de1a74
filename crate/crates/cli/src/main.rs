mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fabrik::eval::ModelId;
use fabrik::pipeline::Method;
use fabrik::FabrikError;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  usage error (bad or missing flags, invalid parameter values)
  3  I/O error (unreadable input, unwritable output, malformed data file)
  4  numerical error (rank-deficient fit, too few observations, degenerate bootstrap)";

#[derive(Parser, Debug)]
#[command(name = "fabrik", version, about = "k-Means seeding for functional data", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write simulated datasets (CSV) and their manifests (JSON).
    #[command(after_help = EXIT_CODES)]
    Simulate(SimulateArgs),
    /// Cluster one dataset file.
    #[command(after_help = EXIT_CODES)]
    Cluster(ClusterArgs),
    /// Run methods over simulated replicates and summarize.
    #[command(after_help = EXIT_CODES)]
    Bench(BenchArgs),
    /// Distortion against df for FABRIk, with a knee suggestion.
    #[command(after_help = EXIT_CODES)]
    Elbow(ElbowArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelId,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long = "p-missing", default_value_t = 0.0)]
    pub p_missing: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Spline degrees of freedom (required by the spline methods).
    #[arg(long)]
    pub df: Option<usize>,
    /// Oversampling factor of the resampled grid.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Bootstrap replicates for the depth-seeded methods.
    #[arg(long = "B", default_value_t = fabrik::pipeline::DEFAULT_BOOTSTRAP)]
    pub b: usize,
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_method, default_value = "FABRIk")]
    pub method: Method,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json")]
    pub emit: Vec<Emit>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelId,
    /// Methods to run, repeated or comma separated; all methods by default.
    #[arg(long, value_parser = parse_method, value_delimiter = ',')]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long = "p-missing", default_value_t = 0.0)]
    pub p_missing: f64,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    pub emit: Vec<Emit>,
}

#[derive(Args, Debug)]
pub struct ElbowArgs {
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub input: Option<PathBuf>,
    /// Sweep replicate 0 of a simulated model instead of a file.
    #[arg(long, value_parser = parse_model)]
    pub model: Option<ModelId>,
    /// Number of clusters; defaults to the model's when --model is given.
    #[arg(long, required_unless_present = "model")]
    pub k: Option<usize>,
    /// Values of df: ranges and lists such as 4..12 or 4,6,8 (ranges are inclusive).
    #[arg(long)]
    pub df: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "B", default_value_t = fabrik::pipeline::DEFAULT_BOOTSTRAP)]
    pub b: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long = "p-missing", default_value_t = 0.0)]
    pub p_missing: f64,
    /// Seedings averaged per df.
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    pub emit: Vec<Emit>,
}

fn parse_model(s: &str) -> Result<ModelId, String> {
    s.parse().map_err(|e: FabrikError| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: FabrikError| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<FabrikError> for CliError {
    fn from(e: FabrikError) -> Self {
        let msg = e.to_string();
        match e {
            FabrikError::Io(_) | FabrikError::Format(_) => CliError::Io(msg),
            FabrikError::InvalidParameter(_)
            | FabrikError::InvalidSpec(_)
            | FabrikError::InvalidK { .. }
            | FabrikError::InvalidProportion(_)
            | FabrikError::InvalidGrid(_) => CliError::Usage(msg),
            _ => CliError::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Cluster(a) => commands::cluster(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::Elbow(a) => commands::elbow(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
