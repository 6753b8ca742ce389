//! `fracdrift` command-line driver.

mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "fracdrift", version, about = "Fractional diffusion kernels, Green functions and Monte Carlo checks")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory receiving every output file [default: fracdrift-out].
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads for independent paths and checks [default: all cores].
    #[arg(long, global = true, env = "FRACDRIFT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate rho(1, z), its moments and a Fourier slice.
    Kernel(KernelArgs),
    /// Solve for the Green function and compare with the Mittag-Leffler form.
    Green(GreenArgs),
    /// Sample the stochastic convolution xi.
    SimulateXi(XiArgs),
    /// Simulate the particle coupled to its field.
    SimulateCoupled(CoupledArgs),
    /// Run the acceptance suite and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct KernelSpecArgs {
    /// Kernel family: mainardi or levy [default: mainardi].
    #[arg(long)]
    family: Option<String>,
    /// Anomalous exponent gamma [default: 0.25].
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    spec: KernelSpecArgs,
    /// Largest |z| of the profile table.
    #[arg(long, default_value_t = 10.0)]
    z_max: f64,
    /// Points in the profile table.
    #[arg(long, default_value_t = 2001)]
    points: usize,
    /// Moment orders to report.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0, 2.0])]
    moments: Vec<f64>,
    /// Largest wavenumber of the Fourier slice.
    #[arg(long, default_value_t = 5.0)]
    k_max: f64,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    #[command(flatten)]
    spec: KernelSpecArgs,
    /// Final time [default: 50].
    #[arg(long)]
    t_end: Option<f64>,
    /// Time step [default: 1e-3].
    #[arg(long)]
    dt: Option<f64>,
    /// Time at which the tail constant is checked.
    #[arg(long, default_value_t = 1e4)]
    probe: f64,
}

#[derive(Args, Debug)]
pub struct XiArgs {
    #[command(flatten)]
    spec: KernelSpecArgs,
    /// Final time [default: 10].
    #[arg(long)]
    t_end: Option<f64>,
    /// Time step [default: 0.01].
    #[arg(long)]
    dt: Option<f64>,
    /// Number of paths [default: 1000].
    #[arg(long)]
    paths: Option<usize>,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CoupledArgs {
    #[command(flatten)]
    spec: KernelSpecArgs,
    /// Scaling parameter lambda in (0, 1) [default: 0.1].
    #[arg(long)]
    lambda: Option<f64>,
    /// Final time in scaled units [default: 1].
    #[arg(long)]
    t_end: Option<f64>,
    /// Time step in scaled units [default: 1e-3].
    #[arg(long)]
    dt: Option<f64>,
    /// Number of paths [default: 100].
    #[arg(long)]
    paths: Option<usize>,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Half width L of the field grid [default: 40].
    #[arg(long = "field-l")]
    l: Option<f64>,
    /// Points m of the field grid [default: 4096].
    #[arg(long = "field-m")]
    m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Smaller Monte Carlo ensembles.
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Full ensembles (the default).
    #[arg(long)]
    full: bool,
    /// Make qualitative checks gating.
    #[arg(long)]
    strict: bool,
    /// Master seed for the Monte Carlo checks.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.threads {
        config::at_least("--threads", n, 1)?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let out = config::pick(cli.output_dir, &file.output_dir, PathBuf::from("fracdrift-out"));
    match cli.command {
        Command::Kernel(a) => commands::kernel(&a, &file, &out),
        Command::Green(a) => commands::green(&a, &file, &out),
        Command::SimulateXi(a) => commands::simulate_xi(&a, &file, &out),
        Command::SimulateCoupled(a) => commands::simulate_coupled(&a, &file, &out),
        Command::Verify(a) => commands::verify(&a, &file, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code())
        }
    }
}
