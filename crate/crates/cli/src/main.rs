use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = squeeze_cli::Cli::parse();
    match squeeze_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
