//! `k3vol`: command-line front end for the k3vol library.
//!
//! Every command writes one report to stdout, JSON by default or CSV with
//! `--csv`. Errors go to stderr as `{"error": {"code", "message"}}`.
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "k3vol", version, about = "Elliptic K3 fibrations, periods and Eisenman volume certificates")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Input JSON file (fibration, lattice or period point depending on the command).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Seed for a random fibration when no input is given.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Target accuracy of ℘ and ℘′.
    #[arg(long, global = true, default_value_t = k3vol::elliptic::DEFAULT_WP_TOL)]
    pub tol_wp: f64,
    /// Target accuracy of the Eisenstein sums.
    #[arg(long, global = true, default_value_t = k3vol::elliptic::DEFAULT_EISENSTEIN_TOL)]
    pub tol_eis: f64,
    /// Largest accepted relative Weierstrass residual `|℘′² − 4℘³ + g₂℘ + g₃| / (1 + |℘|³)`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_residual: f64,
    /// Largest accepted relative error when recovering `g₂, g₃` from the periods.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol_roundtrip: f64,
    /// Largest accepted deviation of the certificate slope from −1.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol_slope: f64,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
}

impl RunConfig {
    fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else {
            Format::Json
        }
    }

    fn check(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("tol-wp", self.tol_wp),
            ("tol-eis", self.tol_eis),
            ("tol-residual", self.tol_residual),
            ("tol-roundtrip", self.tol_roundtrip),
            ("tol-slope", self.tol_slope),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::invalid(format!("--{name} must be positive and finite")));
            }
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant, singular locus and multiplicities.
    Discriminant,
    /// Kodaira type of every singular fibre.
    Fibers {
        /// Print the Kodaira classification table and exit.
        #[arg(long)]
        dump_kodaira_table: bool,
    },
    /// Period lattice of the fibre over `t` and the Eisenstein round trip.
    Periods {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// ℘ and ℘′ on the fibre over `t`, with the Weierstrass residual.
    Wp {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Vanishing certificate for the Eisenman volume at `F(z, t)`.
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 10.0)]
        rmin: f64,
        #[arg(long, default_value_t = 1e4)]
        rmax: f64,
        #[arg(long, default_value_t = 20)]
        rpoints: usize,
    },
    /// Integral lattice reports.
    Lattice {
        #[command(subcommand)]
        sub: LatticeCommand,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCommand {
    /// Rank, signature, determinant and parity (of the K3 lattice unless `--input` is given).
    Sig,
    /// Néron–Severi lattice of a period point read from `--input`.
    Ns {
        #[arg(long, default_value_t = k3vol::k3lattice::DEFAULT_NS_TOL)]
        tol: f64,
    },
    /// Bounded search for a hyperbolic plane.
    ContainsU {
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
}

fn run(cli: &Cli) -> Result<output::Report, CliError> {
    cli.config.check()?;
    let cfg = &cli.config;
    match &cli.command {
        Command::Discriminant => commands::discriminant(cfg),
        Command::Fibers { dump_kodaira_table } => commands::fibers(cfg, *dump_kodaira_table),
        Command::Periods { t } => commands::periods(cfg, t),
        Command::Wp { t, z } => commands::wp(cfg, t, z),
        Command::Certify { t, z, rmin, rmax, rpoints } => commands::certify(cfg, t, z, *rmin, *rmax, *rpoints),
        Command::Lattice { sub } => match sub {
            LatticeCommand::Sig => commands::lattice_sig(cfg),
            LatticeCommand::Ns { tol } => commands::lattice_ns(cfg, *tol),
            LatticeCommand::ContainsU { bound } => commands::lattice_contains_u(cfg, *bound),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("K3E_LOG")).init();
    let cli = Cli::parse();
    let format = cli.config.format();

    std::panic::set_hook(Box::new(|info| log::error!("internal error: {info}")));
    let outcome = std::panic::catch_unwind(|| run(&cli))
        .unwrap_or_else(|_| Err(CliError::new("internal", "unexpected internal failure", 3)));

    match outcome {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code)
        }
    }
}
