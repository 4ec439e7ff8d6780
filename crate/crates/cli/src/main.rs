use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use liftcorr::{run, Cli};

fn main() -> ExitCode {
    // clap exits with code 2 on usage errors
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut console = stdout.lock();
    let outcome = run(&cli, &mut console).and_then(|()| Ok(console.flush()?));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("liftcorr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
