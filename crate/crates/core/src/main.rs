use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hyperdirac::error::Error;
use hyperdirac::geometry::ModelRegistry;
use hyperdirac::scenario::{
    emit_table, run_scenario, summary_line, theorem_list, RunReport, TableFormat, Verdict, MODEL_CHECKS, MODE_CHECKS,
};
use hyperdirac::verify::{verify, Fault};

/// Eigenvalue bounds for hypersurface Dirac operators, checked on exactly solvable models.
#[derive(Parser)]
#[command(name = "hyperdirac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its JSON report.
    Run {
        config: PathBuf,
        /// Report path; overrides the scenario's own `output`.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run a built-in verification suite.
    Verify {
        /// algebra, geometry, operators, bounds, conformal or all
        suite: String,
        /// Mutation fixture: `dh-sign` flips the sign of H in D_H.
        #[arg(long, value_name = "FAULT")]
        inject_fault: Option<String>,
    },
    /// Print the bound table of a report.
    Table {
        report: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List the model kinds.
    ListModels,
    /// List theorem and identity check ids.
    ListChecks,
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::Json(_) | Error::Io(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, output } => match run_scenario(&config, output.as_deref()) {
            Ok(report) => {
                println!("{}", summary_line(&report));
                for f in &report.summary.failures {
                    println!("  {f}");
                }
                if report.verdict == Verdict::Pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => exit_for(&e),
        },
        Command::Verify { suite, inject_fault } => {
            let fault = match inject_fault.as_deref().map(str::parse::<Fault>).transpose() {
                Ok(f) => f.unwrap_or_default(),
                Err(e) => return exit_for(&e),
            };
            match verify(&suite, fault) {
                Ok((ok, table)) => {
                    print!("{table}");
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => exit_for(&e),
            }
        }
        Command::Table { report, format, output } => {
            let result = format
                .parse::<TableFormat>()
                .and_then(|f| RunReport::load(&report).and_then(|r| emit_table(&r, f)));
            match result {
                Ok(text) => match output {
                    Some(path) => match std::fs::write(&path, text) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(e) => exit_for(&e.into()),
                    },
                    None => {
                        print!("{text}");
                        ExitCode::SUCCESS
                    }
                },
                Err(e) => exit_for(&e),
            }
        }
        Command::ListModels => {
            for f in ModelRegistry::global().iter() {
                println!("{:<20} {}", f.name(), f.describe());
            }
            ExitCode::SUCCESS
        }
        Command::ListChecks => {
            for (id, op, describe) in theorem_list() {
                println!("{id:<20} {op:<4} {describe}");
            }
            for (id, describe) in MODE_CHECKS.iter().chain(MODEL_CHECKS) {
                println!("{id:<20} {:<4} {describe}", "");
            }
            ExitCode::SUCCESS
        }
    }
}
