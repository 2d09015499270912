use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ghzcert::classifier::Mode;
use ghzcert_cli::schema::{AngleFile, StateFile, UnitariesFile};
use ghzcert_cli::{
    cmd_certify, cmd_classify, cmd_construct, cmd_solve, cmd_verify, CertifyArgs, CliError, CliResult, Settings,
    Target, VerifyArgs,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ghzcert", version, about = "Stabilization and certification of N-qubit GHZ states")]
struct Cli {
    /// Null-space and angle-condition tolerance [default: 1e-9, or the input file's tol].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Angle arithmetic; defaults to exact when every theta is a rational multiple of pi.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Subcommand)]
enum Command {
    /// Case and M set of an angle file.
    Classify {
        /// Angle file; standard input when absent or "-".
        input: Option<PathBuf>,
    },
    /// Common +1 eigenspace, residuals and sign-sector dimensions.
    Solve { input: Option<PathBuf> },
    /// Observables uniquely stabilizing a GHZ state on n qubits.
    Construct {
        #[arg(long)]
        n: usize,
        /// JSON list of per-party 2x2 unitaries, entries as [re, im].
        #[arg(long, conflicts_with = "random")]
        unitaries: Option<PathBuf>,
        /// Draw Haar-random local unitaries from this seed.
        #[arg(long)]
        random: Option<u64>,
    },
    /// Simulated two-setting certification.
    Certify {
        input: Option<PathBuf>,
        /// State file; defaults to the common +1 eigenstate of A and sigma_Z (required with --b).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Angle file for the second observable; defaults to sigma_Z on every qubit.
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.999)]
        threshold: f64,
    },
    /// Solver against oracle, identity residuals and purification check.
    Verify {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        env_dim: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> CliResult<T> {
    let mut text = String::new();
    let name = match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            p.display().to_string()
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            "stdin".into()
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))
}

fn emit<T: Serialize>(value: &T, pretty: bool) -> CliResult<()> {
    let out = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    println!("{}", out.map_err(|e| CliError::Internal(e.to_string()))?);
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings {
        tol: cli.tol,
        mode: cli.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx,
        }),
    };
    match cli.command {
        Command::Classify { input } => {
            let f: AngleFile = read_json(input.as_deref())?;
            emit(&cmd_classify(&f, settings)?, cli.pretty)
        }
        Command::Solve { input } => {
            let f: AngleFile = read_json(input.as_deref())?;
            emit(&cmd_solve(&f, settings)?, cli.pretty)
        }
        Command::Construct { n, unitaries, random } => {
            let target = match (unitaries, random) {
                (Some(p), _) => Target::Unitaries(read_json::<UnitariesFile>(Some(&p))?),
                (None, Some(seed)) => Target::Random(seed),
                (None, None) => Target::Canonical,
            };
            emit(&cmd_construct(n, target)?, cli.pretty)
        }
        Command::Certify { input, state, b, shots, seed, threshold } => {
            let f: AngleFile = read_json(input.as_deref())?;
            let state = state.map(|p| read_json::<StateFile>(Some(&p))).transpose()?;
            let b = b.map(|p| read_json::<AngleFile>(Some(&p))).transpose()?;
            emit(&cmd_certify(&f, CertifyArgs { state, b, shots, seed, threshold }, settings)?, cli.pretty)
        }
        Command::Verify { input, env_dim, trials, seed } => {
            let f: AngleFile = read_json(input.as_deref())?;
            emit(&cmd_verify(&f, VerifyArgs { env_dim, trials, seed }, settings)?, cli.pretty)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ghzcert: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
