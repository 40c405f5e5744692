use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use h1k_cli::commands;
use h1k_cli::{ConfigOverrides, ProblemInstance, Report, Settings, EXIT_INPUT_ERROR};

/// Decide extremality in the unit ball of H¹_K and emit verifiable evidence.
///
/// Exit codes: 0 extreme, 1 non-extreme, 2 input error, 3 near-threshold.
#[derive(Parser, Debug)]
#[command(name = "h1k", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Every flag is mirrored by an `H1K_*` environment variable; flags win.
#[derive(Args, Debug)]
struct GlobalArgs {
    /// Relative singular-value cutoff for the rank decision.
    #[arg(long, global = true, env = "H1K_RANK_TOL")]
    rank_tol: Option<f64>,
    /// Convergence tolerance of the circle quadrature.
    #[arg(long, global = true, env = "H1K_QUAD_TOL")]
    quad_tol: Option<f64>,
    /// Tolerance for verifying a midpoint decomposition.
    #[arg(long, global = true, env = "H1K_DEC_TOL")]
    dec_tol: Option<f64>,
    /// Largest quadrature grid before giving up.
    #[arg(long, global = true, env = "H1K_GRID_MAX")]
    grid_max: Option<usize>,
    /// Embed the constraint matrix in the report.
    #[arg(long, global = true, env = "H1K_EMIT_MATRIX")]
    emit_matrix: bool,
    /// Record wall-clock time in the report (makes it non-deterministic).
    #[arg(long, global = true, env = "H1K_TIMING")]
    timing: bool,
    /// Write the JSON output here instead of standard output.
    #[arg(long, global = true, env = "H1K_OUT")]
    out: Option<PathBuf>,
    /// Seed for the instance generator.
    #[arg(long, global = true, env = "H1K_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify an instance and report the verdict, with a witness when non-extreme.
    Check { instance: PathBuf },
    /// Inner-outer factorization of the instance polynomial, unnormalized.
    Factorize { instance: PathBuf },
    /// Construct and verify a midpoint decomposition for a non-extreme instance.
    Witness { instance: PathBuf },
    /// Classify every `*.json` file of a directory and run consistency checks.
    Corpus { dir: PathBuf },
    /// Write random instances with known verdicts.
    Generate {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn run(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    let settings = Settings {
        overrides: ConfigOverrides {
            rank_tol: g.rank_tol,
            quad_tol: g.quad_tol,
            dec_tol: g.dec_tol,
            grid_max: g.grid_max,
        },
        emit_matrix: g.emit_matrix,
        timing: g.timing,
    };
    let single =
        |path: &Path, cmd: fn(&ProblemInstance, &Settings) -> Result<Report>| -> Result<i32> {
            let inst = ProblemInstance::read(path)?;
            let report = cmd(&inst, &settings)?;
            if let Some(e) = &report.error {
                eprintln!("error: {e}");
            }
            emit_json(&report, g.out.as_deref())?;
            Ok(report.exit_code)
        };
    match &cli.command {
        Command::Check { instance } => single(instance, commands::check),
        Command::Factorize { instance } => single(instance, commands::factorize),
        Command::Witness { instance } => single(instance, commands::witness),
        Command::Corpus { dir } => {
            let summary = commands::corpus(dir, &settings)?;
            print!("{}", commands::format_table(&summary));
            if let Some(path) = &g.out {
                emit_json(&summary, Some(path))?;
            }
            Ok(summary.exit_code)
        }
        Command::Generate { count, out_dir } => {
            for path in commands::generate(g.seed, *count, out_dir)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        EXIT_INPUT_ERROR
    });
    ExitCode::from(code as u8)
}
