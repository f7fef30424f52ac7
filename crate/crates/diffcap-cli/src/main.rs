//! `diffcap` — timing, capacity, and link simulation for a noiseless
//! diffusion-based molecular communication channel.
//!
//! Subcommands mirror the figures the library reproduces: `impulse` samples
//! the channel's impulse response, `sweep` tabulates symbol durations and
//! capacity across production rates, `timing` solves one operating point,
//! `capacity` evaluates the root equation for given durations, and
//! `simulate` runs the encode → propagate → decode chain.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for solver failures.

mod commands;
mod config;
mod csvfmt;
mod errors;

use clap::{Parser, Subcommand};

use commands::{CapacityArgs, ImpulseArgs, SimulateArgs, SweepArgs, TimingArgs};

#[derive(Parser)]
#[command(
    name = "diffcap",
    version,
    about = "Capacity of a noiseless diffusion-based molecular communication channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the impulse response of the diffusion channel (CSV: t,g)
    Impulse(ImpulseArgs),
    /// Sweep the normalized production rate and tabulate durations and capacity
    Sweep(SweepArgs),
    /// Capacity from four symbol durations
    Capacity(CapacityArgs),
    /// Encode a bit string, trace the concentration, and threshold-decode it
    Simulate(SimulateArgs),
    /// Solve the timing equations at a single production rate
    Timing(TimingArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Impulse(args) => commands::cmd_impulse(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
        Command::Capacity(args) => commands::cmd_capacity(args),
        Command::Simulate(args) => commands::cmd_simulate(args),
        Command::Timing(args) => commands::cmd_timing(args),
    };
    if let Err(e) = result {
        if !e.is_silent() {
            eprintln!("error: {e}");
        }
        std::process::exit(e.exit_code());
    }
}
