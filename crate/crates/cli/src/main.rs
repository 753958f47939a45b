mod commands;
mod config;
mod error;
mod output;

use clap::Parser;
use commands::Common;
use config::{load_file, merge, Cli, Command};
use error::CliError;
use serde_json::Map;
use std::process::ExitCode;

fn run(cli: Cli) -> Result<u8, CliError> {
    let file = match &cli.global.params_file {
        Some(path) => load_file(path)?,
        None => Map::new(),
    };
    let g = merge(&file, &cli.global)?;
    let common = Common::resolve(g.out, g.format, g.precision_bits, g.threads);
    if common.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", common.threads)))?;
    }
    match &cli.command {
        Command::Curve(a) => commands::curve(&common, &file, a),
        Command::Kernel(a) => commands::kernel(&common, &file, a),
        Command::Berezin(a) => commands::berezin_field(&common, &file, a),
        Command::Expansions(a) => commands::expansions(&common, &file, a),
        Command::Verify(a) => commands::verify(&common, &file, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
