//! `collar`: conversions between collar parameters and Fenchel-Nielsen /
//! Dehn-Thurston coordinates, surface solves, cross-section data, the torus
//! ray-limit experiment and seeded verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 domain or usage error,
//! 3 solver non-convergence.

mod commands;
mod config;
mod error;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{Surface, System};
use config::{Format, Overrides, RunConfig, TOL_ENV};
use error::CliError;
use verify::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "collar",
    version,
    about = "Collar-parameter coordinates for hyperbolic collars and measured foliations"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// `key = value` file (abs_tol, rel_tol, max_iter, format, out, seed)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Absolute solver tolerance (overrides COLLAR_TOL)
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert coordinates between systems
    Convert {
        #[arg(long, value_enum)]
        from: System,
        #[arg(long, value_enum)]
        to: System,
        #[arg(allow_negative_numbers = true, num_args = 2..=3, required = true)]
        values: Vec<f64>,
    },
    /// Triangle lengths over collar parameters on the collar surface or the cone
    Solve {
        #[arg(long, value_enum, default_value = "H")]
        surface: Surface,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
    },
    /// Level set {a + b + c = C} of the collar surface, projected to the plane
    CrossSection {
        #[arg(long = "C", alias = "level")]
        level: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Run seeded property suites
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Normalized geodesic lengths along the ray t (x, y)
    Limit {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        /// Word over a, A, b, B (capitals are inverses)
        #[arg(long)]
        word: String,
        #[arg(long = "t", value_delimiter = ',', default_value = "1,10,100,1000")]
        t: Vec<f64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let flags = Overrides {
        abs_tol: g.abs_tol,
        rel_tol: g.rel_tol,
        max_iter: g.max_iter,
        format: g.format,
        out: g.out.clone(),
        seed: g.seed,
    };
    let env_tol = std::env::var(TOL_ENV).ok();
    let cfg = RunConfig::resolve(g.config.as_deref(), env_tol.as_deref(), &flags)?;
    let tol = &cfg.tolerance;

    let mut verification_failed = false;
    let report = match cli.command {
        Command::Convert { from, to, values } => commands::convert(from, to, &values, tol)?,
        Command::Solve { surface, x, y } => commands::solve(surface, x, y, tol)?,
        Command::CrossSection { level, n } => commands::cross_section_cmd(level, n, tol)?,
        Command::Verify { suite, cases } => {
            let (report, passed) = verify::verify(suite, cfg.seed, cases, tol);
            verification_failed = !passed;
            report
        }
        Command::Limit { x, y, word, t } => commands::limit(x, y, &word, &t, tol)?,
    };
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    if verification_failed {
        return Err(CliError::Verification(
            "one or more properties failed".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verification(_)) {
                let record = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                print!("{}", output::to_json_string(&record));
            }
            eprintln!("collar: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
