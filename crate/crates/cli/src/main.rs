//! Experiment harness for huge-object distribution testing.
//!
//! Exit codes: 0 on success, 2 on validation errors, 3 when `--strict` is
//! set and an algorithmic fail/reject verdict occurred.

mod commands;
mod report;

use clap::{Parser, Subcommand};
use commands::{GenMode, Outcome, TransformKind};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hugeobject", version, about = "Distribution property testing in the huge object model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Earth Mover Distance between two distribution files.
    Emd {
        #[arg(long)]
        d1: PathBuf,
        #[arg(long)]
        d2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cluster learner on a distribution file.
    Learn {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "c-t1", default_value_t = 3.0)]
        c_t1: f64,
        #[arg(long = "c-t2", default_value_t = 1.0)]
        c_t2: f64,
        #[arg(long = "c-r", default_value_t = 1.0)]
        c_r: f64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Test membership in a finite candidate property of bounded
    /// VC-dimension.
    TestVc {
        #[arg(long)]
        dist: PathBuf,
        /// Candidate distribution files (repeatable).
        #[arg(long = "candidate", required = true)]
        candidates: Vec<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "c-t1", default_value_t = 3.0)]
        c_t1: f64,
        #[arg(long = "c-t2", default_value_t = 1.0)]
        c_t2: f64,
        #[arg(long = "c-r", default_value_t = 1.0)]
        c_r: f64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the adaptive gap tester on a file or on generated instances.
    GapAdaptive {
        #[arg(long, conflicts_with = "gen")]
        dist: Option<PathBuf>,
        #[arg(long, value_enum)]
        gen: Option<GenMode>,
        /// Payload dimension (power of two).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0 / 9.0)]
        eta: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long = "c-fp", default_value_t = 2.0)]
        c_fp: f64,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate a hard/easy instance family into a distribution file.
    GenInstance {
        /// pvc-yes | pvc-no-q | pvc-no-s | gap-yes | gap-no | pal
        #[arg(long)]
        family: String,
        /// Family parameters as a JSON object.
        #[arg(long, default_value = "{}")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a builtin tester and its non-adaptive simulation side by side.
    SimulateTransform {
        #[arg(long)]
        tester: String,
        #[arg(long, value_enum)]
        transform: TransformKind,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the encoding stack and verify its measured properties.
    VerifyCodes {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Emd { d1, d2, out } => commands::cmd_emd(&d1, &d2, out.as_deref()),
        Command::Learn {
            dist,
            zeta,
            delta,
            r,
            seed,
            c_t1,
            c_t2,
            c_r,
            trials,
            parallelism,
            strict,
            out,
            csv,
        } => commands::cmd_learn(
            &dist,
            zeta,
            delta,
            r,
            seed,
            (c_t1, c_t2, c_r),
            trials,
            parallelism,
            strict,
            out.as_deref(),
            csv.as_deref(),
        ),
        Command::TestVc {
            dist,
            candidates,
            epsilon,
            d,
            seed,
            c_t1,
            c_t2,
            c_r,
            trials,
            parallelism,
            strict,
            out,
        } => commands::cmd_test_vc(
            &dist,
            &candidates,
            epsilon,
            d,
            seed,
            (c_t1, c_t2, c_r),
            trials,
            parallelism,
            strict,
            out.as_deref(),
        ),
        Command::GapAdaptive {
            dist,
            gen,
            n,
            eta,
            epsilon,
            seed,
            trials,
            parallelism,
            c_fp,
            strict,
            out,
            csv,
        } => commands::cmd_gap_adaptive(
            dist.as_deref(),
            gen,
            n,
            eta,
            epsilon,
            seed,
            trials,
            parallelism,
            c_fp,
            strict,
            out.as_deref(),
            csv.as_deref(),
        ),
        Command::GenInstance { family, params, seed, out } => {
            commands::cmd_gen_instance(&family, &params, seed, &out)
        }
        Command::SimulateTransform { tester, transform, n, trials, seed, parallelism, out } => {
            commands::cmd_simulate_transform(
                &tester,
                transform,
                n,
                trials,
                seed,
                parallelism,
                out.as_deref(),
            )
        }
        Command::VerifyCodes { l, seed, out } => commands::cmd_verify_codes(l, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::StrictFailure) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
