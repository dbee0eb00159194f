use std::process::ExitCode;

use clap::Parser;
use stochseir::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stochseir: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
