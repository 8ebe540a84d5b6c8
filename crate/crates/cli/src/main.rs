mod args;
mod commands;
mod golden;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.sieve_cap;
    let report = match &cli.command {
        Command::DensityFormula { moduli } => commands::density_formula_cmd(moduli),
        Command::CheckCd { congruences } => commands::check_cd_cmd(congruences, cap),
        Command::Decide { n, moduli, budget } => {
            commands::decide_cmd(*n, moduli.as_deref(), budget)
        }
        Command::Report { n } => commands::report_cmd(*n),
        Command::Construct { n } => commands::construct_cmd(*n, cap),
        Command::Scan {
            min,
            max,
            budget,
            jobs,
            lemma3_stride,
        } => commands::scan_cmd(*min, *max, budget, *jobs, *lemma3_stride, cli.json),
        Command::VerifyPaper { inject_fault } => golden::verify_paper_cmd(cap, *inject_fault),
    };
    if let Err(e) = report.emit(cli.json) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::from(report.exit_code as u8);
        }
        eprintln!("error: failed to write output: {e}");
        return ExitCode::from(report::exit::RESOURCE as u8);
    }
    ExitCode::from(report.exit_code as u8)
}
