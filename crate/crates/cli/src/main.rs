use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod checks;
mod commands;
mod presets;

use presets::{Grid, Preset, SweepKind};

#[derive(Debug, Parser)]
#[command(name = "tiqpt", version, about = "Four-band topological insulator calculator")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Bulk bands along kz.
    Bands(BandsArgs),
    /// Surface-state density profile.
    Surface(SurfaceArgs),
    /// Entanglement sweeps.
    Sweep(SweepArgs),
    /// Lattice ribbon spectrum and spin-filtered measurements.
    Ribbon(RibbonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON parameter document.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Output CSV; the JSON sidecar goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cross-check closed forms against numerics and fail on mismatch.
    #[arg(long)]
    pub self_check: bool,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Grid as START:STOP:COUNT.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Run grid loops on a single thread.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = SurfaceBranchArg::One)]
    pub branch: SurfaceBranchArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SurfaceBranchArg {
    One,
    Two,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub kind: Option<SweepKind>,
    /// Fixed kz of a concurrence-vs-b sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub kz: Option<f64>,
    /// Energy branch of an entropy-vs-k sweep.
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    pub branch: BranchArg,
    /// Also sweep with the sign of M flipped.
    #[arg(long)]
    pub compare_sign: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct RibbonArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of sites across the ribbon.
    #[arg(long, default_value_t = 60)]
    pub width: usize,
    #[arg(long, default_value_t = 1.0)]
    pub lattice_constant: f64,
    /// kx at which edge channels and conductances are reported.
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub probe_kx: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub bias: f64,
    /// Run repeated filtered measurements and write a measurement record.
    #[arg(long)]
    pub measure: bool,
    #[arg(long, value_enum, default_value_t = AxisArg::Up)]
    pub axis: AxisArg,
    /// Polar angle of a custom axis, radians.
    #[arg(long, allow_hyphen_values = true)]
    pub polar: Option<f64>,
    /// Azimuth of a custom axis, radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub azimuth: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    Up,
    Down,
    X,
    Custom,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(format!("expected START:STOP:COUNT, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let count = count.trim().parse::<usize>().map_err(|e| format!("{count:?}: {e}"))?;
    Ok((num(start)?, num(stop)?, count))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Sub::Bands(args) => commands::bands(args),
        Sub::Surface(args) => commands::surface(args),
        Sub::Sweep(args) => commands::sweep(args),
        Sub::Ribbon(args) => commands::ribbon(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
