//! Command-line front end and local service for `infoscope-core`.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub mod cli;
pub mod serve;

pub use cli::Cli;

/// Parses `args` (program name first) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    cli::execute(cli, out)
}
