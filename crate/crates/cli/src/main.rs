use std::process::ExitCode;

use clap::Parser;
use jsm_cli::{execute, Cli, CliError};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help.
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(run) => {
            print!("{}", run.text);
            if let Some(dir) = &cli.out {
                if let Err(e) = run.write(dir) {
                    eprintln!("jsm: writing {}: {e}", dir.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(run.exit_code() as u8)
        }
        Err(e) => {
            match e {
                CliError::Usage(_) => eprintln!("jsm: {e}\nrun `jsm --help` for usage"),
                _ => eprintln!("jsm: {e}"),
            }
            ExitCode::from(2)
        }
    }
}
