// Copyright 2026 The weft developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! `weft` — non-interactive driver for the simulator.
//!
//! Subcommands: `simulate` (time signals), `rpe` (full phase-estimation
//! pipeline with power-law fit), `bench` (grouped-workload timing), and
//! `bound` (analytic Trotter-error prefactor bound for a split).
//!
//! Exit codes: 0 success, 2 configuration error, 3 input-format error,
//! 4 numerical guard tripped.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "weft", version, about = "Partitioned Pauli-rotation state-vector simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute time signals Z_m for each step size and round.
    Simulate(SimulateArgs),
    /// Full pipeline: signals, phase estimation, Trotter errors, power-law
    /// fit, and bound comparison.
    Rpe(RpeArgs),
    /// Time grouped vs ungrouped execution of a shared-suffix workload.
    Bench(BenchArgs),
    /// Report λ, λ_R, L_det and the analytic prefactor bound for a split.
    Bound(BoundArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Hamiltonian file: one `<coefficient> <pauli word>` per line.
    #[arg(long)]
    hamiltonian: std::path::PathBuf,

    /// Initial-state file (`<index> <re> <im>` lines). Default: the exact
    /// ground state for n <= 10, else the basis state 0.
    #[arg(long)]
    state: Option<std::path::PathBuf>,

    /// Worker count (power of two; the state splits into this many
    /// partitions).
    #[arg(long, default_value_t = 1)]
    workers: u64,

    /// Concurrent cells for independent (delta, round) work items.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Base seed for all randomized sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SplitArgs {
    /// Deterministic term count of the split (default: all terms).
    #[arg(long, conflicts_with = "lambda_r_frac")]
    ldet: Option<usize>,

    /// Target λ_R/λ fraction for the split.
    #[arg(long)]
    lambda_r_frac: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[command(flatten)]
    split: SplitArgs,

    /// Trotter step size; repeat for a sweep.
    #[arg(long, required = true)]
    delta: Vec<f64>,

    /// Maximal RPE round M (signals are computed for m = 0..=M).
    #[arg(long, default_value_t = 0)]
    rounds: u32,

    /// Override for the sample-count parameter κ (default δ/(0.2π)).
    #[arg(long)]
    kappa: Option<f64>,

    /// Sample-reduction factor in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    reduce_samples: f64,

    /// Independent circuit runs per signal (default: 3 when the split has
    /// a randomized part, else 1).
    #[arg(long)]
    repeats: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct RpeArgs {
    #[command(flatten)]
    simulate: SimulateArgs,

    /// Relative tolerance for the convergence check across rounds.
    #[arg(long, default_value_t = 0.05)]
    convergence_tol: f64,
}

#[derive(Args, Debug, Clone)]
struct BenchArgs {
    /// Total qubit count of the benchmark state.
    #[arg(long)]
    qubits: u32,

    /// Worker count (power of two).
    #[arg(long, default_value_t = 2)]
    workers: u64,

    /// Group length L; repeatable.
    #[arg(long = "bench-L", default_value = "1,10,100", value_delimiter = ',')]
    bench_l: Vec<usize>,

    /// Timing repetitions averaged per row.
    #[arg(long, default_value_t = 10)]
    repeats: u32,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[command(flatten)]
    split: SplitArgs,
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
enum CliError {
    Config(String),
    Input(String),
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Input(_) => 3,
            CliError::Guard(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Input(m) | CliError::Guard(m) => m,
        }
    }
}

impl From<weft::Error> for CliError {
    fn from(e: weft::Error) -> Self {
        use weft::Error::*;
        match e {
            Parse { .. } | EmptyInput | InvalidPauliLetter(_) | WordLength(_)
            | MaskOverflow { .. } | Unnormalized(_) => CliError::Input(e.to_string()),
            NumericalGuard(_) => CliError::Guard(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Rpe(args) => commands::rpe(&args),
        Command::Bench(args) => commands::bench(&args),
        Command::Bound(args) => commands::bound(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("weft: error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
