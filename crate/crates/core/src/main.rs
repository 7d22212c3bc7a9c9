use std::process::ExitCode;

use clap::Parser;
use nv_raag::cli::{run, Cli, EXIT_OK, EXIT_PARSE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK } as u8);
        }
    };
    let stdout = std::io::stdout();
    match run(cli.command, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
