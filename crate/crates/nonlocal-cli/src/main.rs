//! `nonlocal`: analyze 2-input/2-output boxes from the command line.
//!
//! Subcommands: `report` (full per-principle JSON report for one box),
//! `scan` (CSV over a 2D polytope slice), `ml-sweep` (macroscopic-locality
//! curves over the isotropic line), `ip-game` (seeded inner-product game
//! simulation). Exit codes: 0 ok, 1 internal error, 2 bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nonlocal::boxes::Behavior;
use nonlocal::principles::ntcc_ip_game;
use nonlocal::report::{ml_sweep_csv, parse_preset, report_box, scan_csv, ScanGrid, SliceBasis};
use nonlocal::Error;

#[derive(Parser)]
#[command(name = "nonlocal", version, about = "Nonlocal box analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every principle checker on one box and print a JSON report.
    Report {
        /// Path to a box JSON file (a 4x4 probability table under "p").
        #[arg(long = "box", conflicts_with = "preset")]
        box_file: Option<PathBuf>,
        /// Named preset: pr1..pr8, noise, iso:<gamma>, det:<a0a1b0b1>.
        #[arg(long, conflicts_with = "box_file")]
        preset: Option<String>,
        /// Macroscopic-locality copy counts to include in the report.
        #[arg(long = "ml", value_delimiter = ',')]
        ml: Vec<usize>,
        /// No-signaling tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan a 2D slice gamma*PR1 + beta*B + (1-gamma-beta)*I and emit CSV.
    Scan {
        /// Which third basis box B spans the slice.
        #[arg(long, value_enum, default_value_t = SliceArg::PrD)]
        slice: SliceArg,
        #[arg(long, default_value_t = 21)]
        gamma_steps: usize,
        #[arg(long, default_value_t = 21)]
        beta_steps: usize,
        /// Worker threads; output order is deterministic either way.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Macroscopic M* of n-copy coarse-grained isotropic boxes, as CSV.
    MlSweep {
        /// Odd copy counts, each at most 15.
        #[arg(long = "n", value_delimiter = ',', default_values_t = [1usize, 3, 5])]
        copy_counts: Vec<usize>,
        #[arg(long, default_value_t = 41)]
        gamma_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the n-bit inner-product game with a shared box.
    IpGame {
        #[arg(long = "box", conflicts_with = "preset")]
        box_file: Option<PathBuf>,
        #[arg(long, conflicts_with = "box_file")]
        preset: Option<String>,
        #[arg(long, default_value_t = 16)]
        bits: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SliceArg {
    /// B = D_1111 (deterministic all-ones box).
    PrD,
    /// B = L_12 = (PR1 + PR2)/2.
    PrL12,
}

impl From<SliceArg> for SliceBasis {
    fn from(v: SliceArg) -> Self {
        match v {
            SliceArg::PrD => SliceBasis::D1111,
            SliceArg::PrL12 => SliceBasis::L12,
        }
    }
}

fn load_box(box_file: &Option<PathBuf>, preset: &Option<String>) -> Result<Behavior, CliError> {
    match (box_file, preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::BadInput(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::BadInput(format!("invalid box JSON: {e}")))
        }
        (None, Some(name)) => parse_preset(name).map_err(CliError::from_validation),
        _ => Err(CliError::BadInput(
            "exactly one of --box or --preset is required".into(),
        )),
    }
}

enum CliError {
    BadInput(String),
    Internal(String),
}

impl CliError {
    /// Library errors triggered by user-supplied data are input errors;
    /// anything else (solver breakdown, size caps hit internally) is not.
    fn from_validation(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::SignalingMarginals(_)
            | Error::ObservableNegativity(_)
            | Error::NoJqpdExists => CliError::BadInput(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Report {
            box_file,
            preset,
            ml,
            tol,
            out,
        } => {
            if !(0.0..1.0).contains(&tol) {
                return Err(CliError::BadInput(format!("tolerance {tol} out of range")));
            }
            let behavior = load_box(&box_file, &preset)?;
            let report = report_box(&behavior, &ml).map_err(CliError::from_validation)?;
            let mut json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            json.push('\n');
            emit(&out, &json)
        }
        Command::Scan {
            slice,
            gamma_steps,
            beta_steps,
            jobs,
            out,
        } => {
            let grid = ScanGrid {
                basis: slice.into(),
                gamma_steps,
                beta_steps,
            };
            let csv = scan_csv(&grid, jobs.max(1)).map_err(CliError::from_validation)?;
            emit(&out, &csv)
        }
        Command::MlSweep {
            copy_counts,
            gamma_steps,
            out,
        } => {
            let csv =
                ml_sweep_csv(&copy_counts, gamma_steps).map_err(CliError::from_validation)?;
            emit(&out, &csv)
        }
        Command::IpGame {
            box_file,
            preset,
            bits,
            trials,
            seed,
            out,
        } => {
            let behavior = load_box(&box_file, &preset)?;
            let result =
                ntcc_ip_game(&behavior, bits, trials, seed).map_err(CliError::from_validation)?;
            let mut json = serde_json::to_string_pretty(&result)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            json.push('\n');
            emit(&out, &json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::BadInput(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
