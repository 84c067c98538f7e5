use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use codeloops::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            2
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
