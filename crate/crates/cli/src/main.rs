use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use werner_cli::commands::{self, parse_q};
use werner_cli::{render, CliError, Format, Method, Output};

/// Werner-state separability toolkit.
///
/// Exit status: 0 all checks pass, 1 a check failed, 2 invalid argument,
/// 3 a separable-only operation was requested with q > 1/3.
#[derive(Debug, Parser)]
#[command(name = "werner", version, about)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the 4x4 matrix of W(q).
    Matrix {
        #[arg(long, value_parser = parse_q)]
        q: f64,
    },
    /// Partial-transpose spectrum and separability verdict.
    Ppt {
        #[arg(long, value_parser = parse_q, required_unless_present = "sweep", conflicts_with = "sweep")]
        q: Option<f64>,
        /// Sweep Q_MIN Q_MAX STEPS.
        #[arg(long, num_args = 3, value_names = ["Q_MIN", "Q_MAX", "STEPS"], allow_negative_numbers = true)]
        sweep: Option<Vec<String>>,
    },
    /// Build an explicit product-state decomposition (q <= 1/3).
    Decompose {
        #[arg(long, value_parser = parse_q)]
        q: f64,
        #[arg(long, value_enum, default_value = "spherical")]
        method: Method,
        /// Polar and azimuthal node counts of the spherical quadrature.
        #[arg(long, num_args = 2, value_names = ["N_THETA", "N_PHI"], default_values_t = [4usize, 8])]
        nodes: Vec<usize>,
    },
    /// Monte Carlo estimate of the hidden-variable correlation (q <= 1/3).
    Hvsim {
        #[arg(long, value_parser = parse_q)]
        q: f64,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [0.0, 0.0, 1.0], allow_negative_numbers = true)]
        l: Vec<f64>,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [0.0, 0.0, 1.0], allow_negative_numbers = true)]
        m: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every built-in check over a grid of q values.
    Verify {
        /// Q_MIN Q_MAX POINTS.
        #[arg(long, num_args = 3, value_names = ["Q_MIN", "Q_MAX", "POINTS"], default_values = ["0", "1/3", "21"])]
        grid: Vec<String>,
    },
}

fn triple(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn range_args(v: &[String]) -> Result<(f64, f64, usize), CliError> {
    let min = parse_q(&v[0]).map_err(CliError::InvalidArgument)?;
    let max = parse_q(&v[1]).map_err(CliError::InvalidArgument)?;
    let n = v[2]
        .parse()
        .map_err(|e| CliError::InvalidArgument(format!("bad count {:?}: {e}", v[2])))?;
    Ok((min, max, n))
}

fn dispatch(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Matrix { q } => commands::matrix(q),
        Command::Ppt { q: Some(q), .. } => commands::ppt(&[q], None),
        Command::Ppt { sweep, .. } => {
            let (min, max, steps) = range_args(&sweep.expect("clap enforces --q or --sweep"))?;
            commands::ppt_sweep(min, max, steps)
        }
        Command::Decompose { q, method, nodes } => commands::decompose(q, method, nodes[0], nodes[1]),
        Command::Hvsim {
            q,
            l,
            m,
            samples,
            seed,
        } => commands::hvsim(q, triple(&l), triple(&m), samples, seed),
        Command::Verify { grid } => {
            let (min, max, n) = range_args(&grid)?;
            commands::verify(min, max, n)
        }
    }
}

fn emit(output: &Output, format: Format, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = render(output, format).context("rendering report")?;
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match dispatch(cli.command) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&output, cli.format, cli.out.as_ref()) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    ExitCode::from(output.report.exit_code() as u8)
}
