use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use socr_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if let Some(msg) = outcome.payload.get("message").and_then(|m| m.as_str()) {
        eprintln!("socr: {msg}");
    }
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{}", render(&outcome.payload, cli.pretty));
    ExitCode::from(outcome.code as u8)
}
