use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::table::Format;

#[derive(Debug, Clone, Parser)]
#[command(name = "ussd-lab", version, about = "Assisted sub-state discrimination and teleportation tables")]
pub struct RunConfig {
    /// Output format; `selftest` defaults to json, everything else to csv.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Summarize one discrimination instance.
    Eval(EvalArgs),
    /// Initial coherence and success probability against |alpha_c|.
    Fig2(Fig2Args),
    /// Coherence redistribution against |alpha|.
    Fig3(Fig3Args),
    /// Bloch-averaged coherences against channel tangle.
    Fig4(Fig4Args),
    /// Teleportation transcript for one input state.
    Teleport(TeleportArgs),
    /// Run the oracle and invariant battery.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p_plus: f64,
    /// Magnitude of the system overlap.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_phase: f64,
    /// Magnitude of the environment overlap.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_c: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_c_phase: f64,
    /// Failure-state angle; defaults to the separating value.
    #[arg(long, allow_negative_numbers = true, requires = "delta")]
    pub beta: Option<f64>,
    /// Failure-state phase; defaults to the separating value.
    #[arg(long, allow_negative_numbers = true, requires = "beta")]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 0.2)]
    pub p_plus: f64,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Fig3Args {
    #[arg(long, default_value_t = 0.4)]
    pub p_plus: f64,
    #[arg(long, default_value_t = 0.8)]
    pub alpha_c: f64,
    /// Berry phase for the main columns.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Fig4Args {
    #[arg(long, default_value_t = 51)]
    pub steps: usize,
    /// Gauss-Legendre nodes for the Bloch average.
    #[arg(long, default_value_t = ussd_core::teleport::DEFAULT_NODES)]
    pub nodes: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TeleportArgs {
    /// Channel angle in [0, pi/4].
    #[arg(long, allow_negative_numbers = true)]
    pub rho: f64,
    /// Polar angle of the input state.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Azimuth of the input state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    /// Draw this many outcomes instead of enumerating branches.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Replace every check's tolerance with this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Comma-separated name filters; a check runs if its name contains any.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}
