use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    digadget::cli::run(digadget::cli::Cli::parse())
}
