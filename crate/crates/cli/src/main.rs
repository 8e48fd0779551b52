use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nkh_cli::commands;
use nkh_cli::{ReportDocument, RunOptions};
use nkh_core::Tolerance;

#[derive(Parser)]
#[command(name = "nkh", version, about = "Homogeneous nearly-Kähler verification")]
struct Cli {
    /// Arithmetic backend.
    #[arg(long, value_enum, global = true, default_value = "exact")]
    backend: BackendArg,
    /// Numerical tolerance, applied as both absolute and relative.
    #[arg(long, global = true, env = "NKH_TOLERANCE")]
    tolerance: Option<f64>,
    /// Seed for the random sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Where `verify`, `solve` and `sweep` write their JSON report.
    #[arg(long, global = true, default_value = "nkh-report.json")]
    save: PathBuf,
    /// Print the report without writing it to disk.
    #[arg(long, global = true)]
    no_save: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one model at given parameters, e.g. `verify flag r=1 s=2 t=4 eps=+-+`.
    Verify {
        /// s3s3, flag, cp3 or s6.
        model: Option<String>,
        /// key=value parameters.
        params: Vec<String>,
        /// Structure-constant file instead of a catalog model.
        #[arg(long, conflicts_with = "model")]
        model_file: Option<PathBuf>,
    },
    /// Derive the NK and Kähler loci of a family and cross-check them.
    Solve { model: String },
    /// Classify a grid, e.g. `sweep flag r=0.5:3:6 s=1,2 eps=all`.
    Sweep {
        model: String,
        axes: Vec<String>,
        /// Refuse grids with more points than this.
        #[arg(long, default_value_t = 1_000_000)]
        max_points: usize,
    },
    /// Re-render a saved report.
    Report {
        #[arg(long, default_value = "nkh-report.json")]
        input: PathBuf,
    },
}

fn render(doc: &ReportDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(doc.to_json()),
        Format::Csv => doc.to_csv(),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mut opts = RunOptions {
        exact: matches!(cli.backend, BackendArg::Exact),
        tol: cli.tolerance.map(Tolerance::uniform).unwrap_or_default(),
        seed: cli.seed,
        timing: cli.timing,
        ..RunOptions::default()
    };
    let fresh = !matches!(cli.command, Command::Report { .. });
    let doc = match cli.command {
        Command::Verify { model, params, model_file } => match (model, model_file) {
            (_, Some(path)) => {
                if !params.is_empty() {
                    bail!("--model-file takes no key=value parameters");
                }
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                commands::verify_model_file(&path.display().to_string(), &text, &opts)?
            }
            (Some(model), None) => commands::verify(&model, &params, &opts)?,
            (None, None) => bail!("verify needs a model name or --model-file"),
        },
        Command::Solve { model } => commands::solve(&model, &opts)?,
        Command::Sweep { model, axes, max_points } => {
            opts.max_points = max_points;
            commands::sweep(&model, &axes, &opts)?
        }
        Command::Report { input } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            ReportDocument::from_json(&text)?
        }
    };
    if fresh && !cli.no_save {
        let path = &cli.save;
        std::fs::write(path, doc.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{}", render(&doc, cli.format)?.trim_end()) {
        // a closed pipe (e.g. `| head`) is not an error
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(e.into());
        }
    }
    Ok(doc.disagreements.is_empty())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("analytic prediction and classification disagree");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
