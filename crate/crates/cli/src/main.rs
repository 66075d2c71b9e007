//! `liekv`: batch front end for the symbolic and numeric checks.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical residual or tolerance
//! failure, 2 a usage or input error.

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use liekv_cli::{commands, Cli, Command, Format};

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("LIEKV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("LIEKV_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let command: Vec<String> = std::env::args().skip(1).collect();
    let result = match cli.command {
        Command::Bch { max_degree, method } => commands::bch(max_degree as usize, method),
        Command::Kv { check, max_degree } => commands::kv(check, max_degree as usize),
        Command::Numeric {
            algebra,
            check,
            samples,
            seed,
            tol,
            max_degree,
        } => commands::load_algebra(&algebra).and_then(|alg| {
            commands::numeric(
                &alg,
                check,
                samples as usize,
                seed,
                tol,
                max_degree.map(|d| d as usize),
            )
        }),
        Command::Duflo {
            algebra,
            check,
            invariant_degree,
            samples,
            seed,
        } => commands::load_algebra(&algebra).and_then(|alg| {
            commands::duflo(
                &alg,
                check,
                invariant_degree as usize,
                samples as usize,
                seed,
            )
        }),
    };
    match result {
        Ok(outcome) => {
            let report = outcome.into_report(command);
            let text = match cli.format {
                Format::Text => report.render_text(),
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
                }
            };
            // A closed pipe (`liekv ... | head`) is not an error of the run.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
