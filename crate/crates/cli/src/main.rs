//! `telsim`: noisy-channel quantum teleportation simulator.
//!
//! Subcommands reproduce the averaged-fidelity table, the figure sweep
//! data, the EPR-channel comparison, the GHZ-vs-W robustness crossover,
//! Groverian measures, and the full verification suite. Exit codes:
//! 0 success, 1 numerical/tolerance failure, 2 usage or config error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::FigureMode;
use output::Format;
use telsim_core::lindblad::NoiseKind;
use telsim_core::states::GROVERIAN_DEFAULT_SEED;
use telsim_core::teleport::StdChannel;

#[derive(Parser)]
#[command(
    name = "telsim",
    version,
    about = "Two-party quantum teleportation through noisy EPR/GHZ/W channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum NoiseArg {
    X,
    Y,
    Z,
    Iso,
}

impl From<NoiseArg> for NoiseKind {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::X => NoiseKind::AxisX,
            NoiseArg::Y => NoiseKind::AxisY,
            NoiseArg::Z => NoiseKind::AxisZ,
            NoiseArg::Iso => NoiseKind::Isotropic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ChannelArg {
    Epr,
    Ghz,
    W,
}

impl From<ChannelArg> for StdChannel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Epr => StdChannel::Epr,
            ChannelArg::Ghz => StdChannel::Ghz,
            ChannelArg::W => StdChannel::W,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KtRangeArgs {
    /// A single κt value.
    #[arg(long, conflicts_with = "kt_range")]
    kt: Option<f64>,
    /// Evenly spaced κt values: START STOP COUNT.
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"])]
    kt_range: Option<Vec<f64>>,
}

impl KtRangeArgs {
    /// Resolve to a κt list, falling back to `default` when neither flag is
    /// given. Errors (exit 2) on negative values or COUNT < 2.
    fn resolve(&self, default: &[f64]) -> Result<Vec<f64>, String> {
        if let Some(kt) = self.kt {
            if kt < 0.0 {
                return Err(format!("kt must be >= 0, got {kt}"));
            }
            return Ok(vec![kt]);
        }
        if let Some(raw) = &self.kt_range {
            let (start, stop, count) = (raw[0], raw[1], raw[2]);
            if start < 0.0 || stop < start {
                return Err(format!("invalid kt range [{start}, {stop}]"));
            }
            if count.fract() != 0.0 || count < 2.0 {
                return Err(format!("range COUNT must be an integer >= 2, got {count}"));
            }
            return Ok(commands::linspace(start, stop, count as usize));
        }
        Ok(default.to_vec())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Averaged fidelity for every channel × noise cell, numeric vs closed
    /// form.
    Table1 {
        #[command(flatten)]
        kts: KtRangeArgs,
        /// Restrict to one channel (ghz or w).
        #[arg(long, value_enum)]
        channel: Option<ChannelArg>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Curve data: F̄(κt) per noise kind (4a/4b/4c) or F(θ, φ) surfaces (5).
    Sweep {
        /// Dataset to emit.
        #[arg(long, value_enum)]
        figure: FigureMode,
        #[command(flatten)]
        kts: KtRangeArgs,
        /// Noise kind for the surface mode.
        #[arg(long, value_enum, default_value_t = NoiseArg::X)]
        noise: NoiseArg,
        /// θ × φ grid of the surface mode: N M.
        #[arg(long, num_args = 2, value_names = ["N", "M"])]
        grid: Option<Vec<usize>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// EPR channel: same-axis vs mixed-axis vs isotropic noise.
    Epr {
        #[command(flatten)]
        kts: KtRangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Locate (or rule out) the GHZ-vs-W robustness crossover.
    Crossover {
        /// Noise kind to compare under.
        #[arg(long, value_enum, default_value_t = NoiseArg::Z)]
        noise: NoiseArg,
        /// Bisection bracket for the z-noise search: LO HI.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        bracket: Option<Vec<f64>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every cross-check; one pass/fail line per check.
    Verify {
        /// Override the RK4 step count (small values demonstrate failure).
        #[arg(long)]
        rk4_steps: Option<usize>,
        /// Seed for the Groverian multi-starts.
        #[arg(long, default_value_t = GROVERIAN_DEFAULT_SEED)]
        seed: u64,
    },
    /// Groverian entanglement measures of the channel states.
    Groverian {
        /// Seed for the multi-starts and the random two-branch channels.
        #[arg(long, default_value_t = GROVERIAN_DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Table1 {
            kts,
            channel,
            output,
        } => {
            let kt_list = match kts.resolve(&[0.0, 0.1, 0.5, 1.0]) {
                Ok(v) => v,
                Err(e) => return usage_error(&e),
            };
            let filter = match channel {
                Some(ChannelArg::Epr) => {
                    return usage_error("table1 covers the ghz and w channels; use `epr`")
                }
                other => other.map(StdChannel::from),
            };
            commands::cmd_table1(&kt_list, filter, output.format, output.out.as_deref())
        }
        Command::Sweep {
            figure,
            kts,
            noise,
            grid,
            output,
        } => {
            // The surface mode is evaluated at a single κt (0.5 by default).
            let fixed_kt = match (figure, kts.kt) {
                (FigureMode::Fig5, Some(kt)) => kt,
                (FigureMode::Fig5, None) => 0.5,
                _ => 0.0,
            };
            let kt_list = match kts.resolve(&commands::linspace(0.0, 3.0, 301)) {
                Ok(v) => v,
                Err(e) => return usage_error(&e),
            };
            let grid_pair = match grid {
                Some(g) => {
                    if g[0] < 2 || g[1] < 2 {
                        return usage_error("grid sizes must be >= 2");
                    }
                    (g[0], g[1])
                }
                None => (61, 61),
            };
            commands::cmd_sweep(
                figure,
                &kt_list,
                fixed_kt,
                noise.into(),
                grid_pair,
                output.format,
                output.out.as_deref(),
            )
        }
        Command::Epr { kts, output } => {
            let kt_list = match kts.resolve(&commands::linspace(0.0, 3.0, 61)) {
                Ok(v) => v,
                Err(e) => return usage_error(&e),
            };
            commands::cmd_epr(&kt_list, output.format, output.out.as_deref())
        }
        Command::Crossover {
            noise,
            bracket,
            output,
        } => {
            let bracket_pair = match bracket {
                Some(b) => {
                    if b[0] < 0.0 || b[1] <= b[0] {
                        return usage_error("bracket must satisfy 0 <= LO < HI");
                    }
                    (b[0], b[1])
                }
                None => (0.05, 0.5),
            };
            commands::cmd_crossover(
                noise.into(),
                bracket_pair,
                output.format,
                output.out.as_deref(),
            )
        }
        Command::Verify { rk4_steps, seed } => commands::cmd_verify(rk4_steps, seed),
        Command::Groverian { seed, output } => {
            commands::cmd_groverian(seed, output.format, output.out.as_deref())
        }
    };

    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(telsim_core::Error::Contract(msg)) => usage_error(&msg),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
