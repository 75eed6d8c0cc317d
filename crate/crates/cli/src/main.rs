use std::process::ExitCode;

use clap::Parser;
use shortreach_cli::{run_command, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let out = match run_command(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", out.text),
    }
    ExitCode::SUCCESS
}
