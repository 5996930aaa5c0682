use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use cgeom::catalog::{self, EXAMPLE_IDS};
use cgeom::manifest::{parse_check_list, parse_manifest, Check, Sampling, VerificationJob, REPORT_OPS};
use cgeom::report::{render_json, render_text, run_example_report, run_job, Report};
use cgeom::verify::IDENTITY_IDS;

#[derive(Parser)]
#[command(name = "cgeom", version, about = "Verify identities of horizontally conformal submersions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a manifest file.
    Verify {
        manifest: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run a built-in example (5.1, 5.2, 5.3, 5.4) with its expected values.
    Example {
        id: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// List identity ids and report operations accepted by --checks.
    ListChecks,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Opts {
    /// Relative residual tolerance [default: 1e-6, or the manifest's]
    #[arg(long)]
    tol: Option<f64>,
    /// Number of sample points [default: 20 for box sampling; all listed points]
    #[arg(long)]
    points: Option<usize>,
    /// Seed for frames and random coefficients
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Comma-separated checks, or `all` [default: the manifest's list]
    #[arg(long)]
    checks: Option<String>,
}

fn apply(job: &mut VerificationJob, o: &Opts) -> Result<(), String> {
    if let Some(t) = o.tol {
        if !(t > 0.0) {
            return Err(format!("--tol must be positive, got {t}"));
        }
        job.tolerance = t;
    }
    if let Some(c) = &o.checks {
        let checks = parse_check_list(c, job.xi.is_some() || job.mu.is_some()).map_err(|e| e.to_string())?;
        for c in &checks {
            if let Check::Conformal(f) = c {
                if job.field(f).is_none() {
                    return Err(format!("unresolved field `{f}`"));
                }
            }
        }
        job.checks = checks;
    }
    if let Some(n) = o.points {
        match &mut job.sampling {
            Sampling::Box { count, .. } => {
                *count = n;
                job.resample().map_err(|e| e.to_string())?;
            }
            Sampling::List(_) => job.points.truncate(n),
        }
    }
    Ok(())
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", render_text(report)),
        Format::Json => print!("{}", render_json(report)),
    }
}

fn invalid(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (report, format) = match cli.command {
        Command::ListChecks => {
            println!("identities:");
            for id in IDENTITY_IDS {
                println!("  {id}");
            }
            println!("operations:");
            for op in REPORT_OPS {
                if *op == "conformal" {
                    println!("  conformal:<field>");
                } else {
                    println!("  {op}");
                }
            }
            println!("  all");
            return ExitCode::SUCCESS;
        }
        Command::Verify { manifest, opts } => {
            let text = match std::fs::read_to_string(&manifest) {
                Ok(t) => t,
                Err(e) => return invalid(format!("{}: {e}", manifest.display())),
            };
            let mut job = match parse_manifest(&text) {
                Ok(j) => j,
                Err(e) => return invalid(format!("{}: {e}", manifest.display())),
            };
            if let Err(e) = apply(&mut job, &opts) {
                return invalid(e);
            }
            match run_job(&job, &manifest.display().to_string(), opts.seed) {
                Ok(r) => (r, opts.format),
                Err(e) => return invalid(e),
            }
        }
        Command::Example { id, opts } => {
            if !EXAMPLE_IDS.contains(&id.as_str()) {
                return invalid(format!("unknown example `{id}` (expected one of {})", EXAMPLE_IDS.join(", ")));
            }
            let mut job = match catalog::load_example(&id) {
                Ok((j, _)) => j,
                Err(e) => return invalid(e),
            };
            if let Err(e) = apply(&mut job, &opts) {
                return invalid(e);
            }
            match run_example_report(&id, &job, opts.seed) {
                Ok(r) => (r, opts.format),
                Err(e) => return invalid(e),
            }
        }
    };
    emit(&report, format);
    eprintln!("finished in {} ms", started.elapsed().as_millis());
    ExitCode::from(report.exit_code() as u8)
}
