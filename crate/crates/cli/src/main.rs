mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use haarlap::learn::{FeatureKind, Task, WeightNormalization};
use haarlap::Construction;

use crate::source::GraphSource;

#[derive(Parser, Debug)]
#[command(name = "haarlap", version, about = "Hermitian Laplacians for directed graphs")]
struct Cli {
    /// Worker threads for experiment-level parallelism (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the Laplacian of a graph as a Matrix Market or CSV file.
    Laplacian(LaplacianArgs),
    /// Eigendecomposition of a Laplacian: frequencies, eigenvectors, heatmap data.
    Spectrum(SpectrumArgs),
    /// Low-pass denoising experiment on random geometric graphs.
    Denoise(DenoiseArgs),
    /// Train the spectral GCN on a link-prediction task.
    Train(Box<TrainArgs>),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Run directory (default: runs/<command>-<timestamp>[-seed<seed>]).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LaplacianArgs {
    #[command(flatten)]
    source: GraphSource,
    /// standard, haar, magnetic[:q] or signmagnetic.
    #[arg(long, default_value = "haar")]
    kind: Construction,
    /// Charge for the magnetic kind; overrides a q given in --kind.
    #[arg(long)]
    q: Option<f64>,
    /// I − D^{-1/2} H D^{-1/2} instead of D − H.
    #[arg(long)]
    normalized: bool,
    /// Output file name inside the run directory; .mtx or .csv selects the format.
    #[arg(long, default_value = "laplacian.mtx")]
    file: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Householder,
    Jacobi,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    source: GraphSource,
    /// standard, haar, magnetic[:q] or signmagnetic.
    #[arg(long, default_value = "haar")]
    kind: Construction,
    /// Charge for the magnetic kind; overrides a q given in --kind.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    normalized: bool,
    /// Dense eigensolver.
    #[arg(long, value_enum, default_value = "householder")]
    method: Method,
    /// Seed for generated graphs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    /// TOML file with any DenoiseConfig fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated constructions.
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<Construction>>,
    /// Use normalized Laplacians.
    #[arg(long)]
    normalized: bool,
    /// Comma-separated numbers of kept frequencies.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Comma-separated noise levels.
    #[arg(long, value_delimiter = ',')]
    sigmas: Option<Vec<f64>>,
    /// Random graphs per cell.
    #[arg(long)]
    graphs: Option<usize>,
    /// Noise draws per graph.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Nodes per graph.
    #[arg(long)]
    n: Option<usize>,
    /// Connection radius (default 2/√n).
    #[arg(long)]
    r: Option<f64>,
    /// Digon probability.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    w_min: Option<f64>,
    #[arg(long)]
    w_max: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    source: GraphSource,
    /// existence, three-class or weight.
    #[arg(long)]
    task: Task,
    /// Weight normalization applied before training.
    #[arg(long, default_value = "none")]
    normalization: WeightNormalization,
    /// TOML file with any TrainConfig fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// standard, haar, magnetic[:q] or signmagnetic.
    #[arg(long)]
    kind: Option<Construction>,
    #[arg(long)]
    layers: Option<usize>,
    /// Layer width.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    max_epochs: Option<usize>,
    /// Non-improving epochs tolerated before stopping.
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long)]
    dropout: Option<f64>,
    #[arg(long)]
    weight_decay: Option<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// degree or identity.
    #[arg(long)]
    features: Option<FeatureKind>,
    /// Apply weight decay directly to the parameters instead of the gradient.
    #[arg(long)]
    decoupled_decay: bool,
    /// Sweep layers {2,4,8} × d {16,32,64} × lr {0.001,0.005,0.01,0.05}.
    #[arg(long)]
    grid: bool,
    /// Skip writing model checkpoints.
    #[arg(long)]
    no_checkpoint: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Laplacian(a) => commands::laplacian(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Denoise(a) => commands::denoise(a),
        Command::Train(a) => commands::train(*a),
    };
    match result {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
