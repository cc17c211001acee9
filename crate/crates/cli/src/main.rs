//! Binary entry point: flag parsing, IO, and exit-code plumbing.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::Parser;

use folia_cli::report::Report;
use folia_cli::{run_job, Command, JobOptions, Outcome};

/// Exact integrability analysis for deformations of polynomial 1-forms.
#[derive(Parser)]
#[command(name = "folia", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input JSON file; stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Report destination; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Quadrature tolerance for period integrals.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Node cap for the adaptive quadrature.
    #[arg(long, global = true)]
    max_nodes: Option<usize>,

    /// Truncation order K for `rescale` (overrides the input's "K").
    #[arg(long, global = true)]
    order: Option<usize>,

    /// Seed for the heuristic fiber transversality probe.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

fn read_input(path: &Option<PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_report(path: &Option<PathBuf>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().write_all(bytes),
    }
}

fn main() {
    let cli = Cli::parse();
    let opts =
        JobOptions { tol: cli.tol, max_nodes: cli.max_nodes, order: cli.order, seed: cli.seed };

    let outcome = match read_input(&cli.input) {
        Ok(input_json) => run_job(cli.command, &input_json, &opts),
        Err(e) => {
            let message = match &cli.input {
                Some(p) => format!("cannot read input {}: {e}", p.display()),
                None => format!("cannot read stdin: {e}"),
            };
            let report = Report::failure(cli.command.name(), None, message.clone());
            Outcome {
                report_json: report.to_json_bytes(),
                summary: format!("{}: error — {message}", cli.command.name()),
                exit_code: report.exit_code,
            }
        }
    };

    if let Err(e) = write_report(&cli.output, &outcome.report_json) {
        eprintln!("folia: cannot write report: {e}");
        std::process::exit(2);
    }
    eprintln!("{}", outcome.summary);
    std::process::exit(outcome.exit_code);
}
