use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config;
mod failure;
mod table;

use args::{Cli, Command};
use failure::{Failure, EXIT_VALIDATION};

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Evolve(a) => commands::evolve(a),
        Command::Minimize(a) => commands::minimize(a),
        Command::SweepTheta(a) => commands::sweep_theta(a),
        Command::Scaling(a) => commands::scaling(a),
        Command::Regime(a) => commands::regime(a),
        Command::OracleCheck(a) => commands::oracle_check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure {
                code: EXIT_VALIDATION,
                kind: "InvalidArguments".into(),
                message: e.to_string().trim_end().to_string(),
            };
            eprintln!("{}", f.to_json());
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code as u8)
        }
    }
}
