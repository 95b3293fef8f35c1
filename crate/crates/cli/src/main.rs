use std::process::ExitCode;

use clap::Parser;
use rankforge_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = report.render(cli.global.format);
            match &cli.global.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("{}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if report.negative { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({"error": e.to_string(), "exit": exit_code(&e)}));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
