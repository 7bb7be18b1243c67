use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use robin_ball_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out).and_then(|c| {
        out.flush().map_err(|e| robin_ball_cli::CliError::io("<stdout>", e))?;
        Ok(c)
    }) {
        Ok(c) => c,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
