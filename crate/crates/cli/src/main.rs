mod args;
mod output;
mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use run::CliError;

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn real_main() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };

    if let Ok(v) = std::env::var("QRABI_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| {
            CliError::Usage(format!("QRABI_THREADS must be a non-negative integer, got {v:?}"))
        })?;
        qrabi_core::configure_threads(n);
    }

    run::execute(cli)
}
