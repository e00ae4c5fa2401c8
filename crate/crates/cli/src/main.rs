mod args;
mod commands;
mod config;
mod error;
mod output;
mod record;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                error::EXIT_USAGE as u8
            } else {
                0
            });
        }
    };
    let result = match cli.command {
        Command::Denoise(a) => commands::denoise_cmd(a),
        Command::Detect(a) => commands::detect_cmd(a),
        Command::Compare(a) => commands::compare_cmd(a),
        Command::Bands(a) => commands::bands_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("haarcorner: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
