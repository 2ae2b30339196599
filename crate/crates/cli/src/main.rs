use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use realucp::numerics::Tolerance;
use realucp_cli::commands::{
    batch_exit_code, check_value, render_check, render_skew, render_stinespring, run_batch,
    skew_matrix, skew_value, stinespring_value, RunOptions,
};
use realucp_cli::document::{read_json, split_batch, square_matrix, DocumentError, Rows};
use realucp_cli::gallery::{render_gallery, run_gallery};
use realucp_cli::report::{Outcome, SkewReport};
use serde::Serialize;

#[derive(Args, Clone)]
struct Common {
    /// Absolute tolerance; the relative tolerance keeps its default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for generic choices.
    #[arg(long, global = true, env = "REALUCP_SEED", default_value_t = realucp::extremality::DEFAULT_SEED)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include per-stage wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide purity, linear and C*-extremality of a map document.
    Check { path: PathBuf },
    /// Print the minimal Stinespring dilation of a map document.
    Stinespring { path: PathBuf },
    /// Analyse a contractive skew-symmetric matrix.
    Skew {
        #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
        path: Option<PathBuf>,
        /// Inline row-major matrix, e.g. '[[0,1],[-1,0]]'.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Run the built-in example corpus.
    Gallery {
        /// Only cases whose name or group contains this text.
        #[arg(long)]
        filter: Option<String>,
    },
}

/// Extremality checks for unital completely positive maps on real
/// C*-algebras.
///
/// Exit codes: 0 affirmative, 1 negative or undecided, 2 invalid input.
#[derive(Parser)]
#[command(name = "realucp", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

fn options(c: &Common) -> Result<RunOptions, String> {
    let mut tol = Tolerance::default();
    if let Some(t) = c.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("--tol must be a positive number, got {t}"));
        }
        tol.atol = t;
    }
    Ok(RunOptions {
        tol,
        seed: c.seed,
        timings: c.timings,
    })
}

/// Writes a line to stdout; a closed pipe (`| head`) is not an error.
fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json<T: Serialize>(v: &T) {
    out(&serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn emit<T: Serialize>(
    batch: bool,
    outcomes: Vec<Outcome<T>>,
    json: bool,
    render: impl Fn(&T) -> String,
) {
    if json {
        if batch {
            print_json(&outcomes);
        } else {
            match &outcomes[0] {
                Outcome::Ok(r) => print_json(r),
                invalid => print_json(invalid),
            }
        }
        return;
    }
    for (i, o) in outcomes.iter().enumerate() {
        if batch {
            out(&format!("== entry {i}"));
        }
        match o {
            Outcome::Ok(r) => out(&render(r)),
            Outcome::Invalid { error, .. } => eprintln!("error: {error}"),
        }
    }
}

fn load(path: &Path) -> Result<(bool, Vec<serde_json::Value>), DocumentError> {
    Ok(split_batch(read_json(path)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = match options(&cli.common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = cli.common.json;
    let code = match cli.command {
        Command::Check { path } => match load(&path) {
            Ok((batch, items)) => {
                let out = run_batch(items, &opts, check_value);
                let code = batch_exit_code(&out, |r| r.verdicts.cstar_extreme == "yes");
                emit(batch, out, json, render_check);
                code
            }
            Err(e) => fail(e),
        },
        Command::Stinespring { path } => match load(&path) {
            Ok((batch, items)) => {
                let out = run_batch(items, &opts, stinespring_value);
                let code = batch_exit_code(&out, |_| true);
                emit(batch, out, json, render_stinespring);
                code
            }
            Err(e) => fail(e),
        },
        Command::Skew {
            path: Some(path), ..
        } => match load(&path) {
            Ok((batch, items)) => {
                let out = run_batch(items, &opts, skew_value);
                let code = batch_exit_code(&out, |r| r.cstar_extreme);
                emit(batch, out, json, render_skew);
                code
            }
            Err(e) => fail(e),
        },
        Command::Skew { matrix, .. } => {
            let inline = matrix.expect("clap requires a path or --matrix");
            let out = match inline_skew(&inline, &opts) {
                Ok(r) => Outcome::Ok(r),
                Err(e) => Outcome::Invalid {
                    index: 0,
                    error: e.to_string(),
                },
            };
            let out = vec![out];
            let code = batch_exit_code(&out, |r| r.cstar_extreme);
            emit(false, out, json, render_skew);
            code
        }
        Command::Gallery { filter } => {
            let report = run_gallery(&opts, filter.as_deref());
            if json {
                print_json(&report);
            } else {
                out(&render_gallery(&report));
            }
            u8::from(!report.all_pass)
        }
    };
    ExitCode::from(code)
}

fn inline_skew(text: &str, opts: &RunOptions) -> Result<SkewReport, DocumentError> {
    let rows: Rows = serde_json::from_str(text)?;
    skew_matrix(&square_matrix(&rows, "matrix")?, None, opts)
}

fn fail(e: DocumentError) -> u8 {
    eprintln!("error: {e}");
    2
}
