use std::process::ExitCode;

use clap::Parser;
use moc_lab_cli::{execute, Cli};

fn main() -> ExitCode {
    ExitCode::from(execute(Cli::parse()))
}
