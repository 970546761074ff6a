//! `spin-stirling`: evaluate single cycles, sweep operating-mode maps, fit
//! susceptibility data and build engine curves from fitted couplings.
//!
//! Exit codes: 0 success, 2 invalid arguments or config, 3 I/O failure,
//! 4 unusable input data.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliResult;

#[derive(Parser, Debug)]
#[command(name = "spin-stirling", version, about)]
struct Cli {
    /// TOML file with one `[section]` per subcommand; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stroke heats, work, mode and efficiency of one cycle.
    Cycle(CycleArgs),
    /// Operating-mode map over coupling and temperature ratios.
    Sweep(SweepArgs),
    /// Bleaney-Bowers fit of a chi(T) CSV.
    Fit(FitArgs),
    /// Heat-engine performance against the hot-bath temperature.
    EngineCurve(EngineCurveArgs),
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    /// J_A/k_B in kelvin, the coupling at corners D and A.
    #[arg(long = "ja-k", allow_hyphen_values = true)]
    pub ja_k: Option<f64>,
    /// J_B/k_B in kelvin, the coupling at corners B and C.
    #[arg(long = "jb-k", allow_hyphen_values = true)]
    pub jb_k: Option<f64>,
    /// Hot-bath temperature in kelvin.
    #[arg(long, allow_hyphen_values = true)]
    pub th: Option<f64>,
    /// Cold-bath temperature in kelvin.
    #[arg(long, allow_hyphen_values = true)]
    pub tc: Option<f64>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Output file; the format follows `--format` or the extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `b-negative` or `b-positive`: sign of J_B.
    #[arg(long)]
    pub branch: Option<String>,
    /// Anchor J_B/k_B in kelvin [default: 32 K with the branch sign].
    #[arg(long = "jb-k", allow_hyphen_values = true)]
    pub jb_k: Option<f64>,
    /// Cold-bath temperature in kelvin [default: 20].
    #[arg(long, allow_hyphen_values = true)]
    pub tc: Option<f64>,
    /// Smallest J_A/J_B [default: -3].
    #[arg(long = "ratio-min", allow_hyphen_values = true)]
    pub ratio_min: Option<f64>,
    /// Largest J_A/J_B [default: 3].
    #[arg(long = "ratio-max", allow_hyphen_values = true)]
    pub ratio_max: Option<f64>,
    /// Points along J_A/J_B [default: 400].
    #[arg(long = "ratio-steps")]
    pub ratio_steps: Option<usize>,
    /// Largest T_h/T_c; the axis is (1, max] [default: 3].
    #[arg(long = "temp-ratio-max", allow_hyphen_values = true)]
    pub temp_ratio_max: Option<f64>,
    /// Points along T_h/T_c [default: 400].
    #[arg(long = "temp-steps")]
    pub temp_steps: Option<usize>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// CSV with `T_K,chi_emu_mol` columns.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Hold the Lande factor at this value [default: 2.1].
    #[arg(long = "fix-g", conflicts_with = "free_g", allow_hyphen_values = true)]
    pub fix_g: Option<f64>,
    /// Fit the Lande factor together with J.
    #[arg(long = "free-g")]
    pub free_g: bool,
    /// Starting g for `--free-g` [default: 2.1].
    #[arg(long = "g-init", allow_hyphen_values = true)]
    pub g_init: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EngineCurveArgs {
    #[arg(long = "ja-k", allow_hyphen_values = true)]
    pub ja_k: Option<f64>,
    #[arg(long = "jb-k", allow_hyphen_values = true)]
    pub jb_k: Option<f64>,
    /// Cold-bath temperature in kelvin.
    #[arg(long, allow_hyphen_values = true)]
    pub tc: Option<f64>,
    /// First hot-bath temperature; must exceed `--tc`.
    #[arg(long = "th-min", allow_hyphen_values = true)]
    pub th_min: Option<f64>,
    #[arg(long = "th-max", allow_hyphen_values = true)]
    pub th_max: Option<f64>,
    /// Number of hot-bath temperatures, evenly spaced.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> CliResult<()> {
    let file = cli.config.as_deref().map(config::load).transpose()?;
    let file = file.as_ref();
    match cli.command {
        Command::Cycle(args) => commands::cycle(args, file),
        Command::Sweep(args) => commands::sweep(args, file),
        Command::Fit(args) => commands::fit(args, file),
        Command::EngineCurve(args) => commands::engine_curve(args, file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
