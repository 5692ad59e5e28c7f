use std::process::ExitCode;

use clap::Parser;
use infoscope_cli::{cli, Cli};

fn main() -> ExitCode {
    let parsed = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli::execute(parsed, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
