//! The `jsm` command line. Each subcommand returns a [`Run`] holding a
//! JSON result, a digest over it, and a human-readable summary, so tests can
//! drive commands without spawning the binary.

pub mod args;
mod asym;
mod norm;
mod plegma;
pub mod report;
mod uals;

use jsm_core::num::parse_rational;
use jsm_core::Q;

pub use args::Cli;
pub use report::{CliError, Run, RunManifest, SCHEMA};

use args::{Command, PlegmaCmd, UalsCmd};

pub fn execute(cli: &Cli) -> Result<Run, CliError> {
    let jobs = cli.jobs.max(1);
    match &cli.command {
        Command::Norm(a) => norm::run(a, cli.seed, jobs),
        Command::Plegma(PlegmaCmd::Enum(a)) => plegma::enumerate(a, cli.seed),
        Command::Plegma(PlegmaCmd::Check(a)) => plegma::check(a, cli.seed),
        Command::Plegma(PlegmaCmd::Shift(a)) => plegma::shift(a, cli.seed),
        Command::Ramsey(a) => plegma::ramsey(a, cli.seed),
        Command::Jsm(a) => asym::jsm(a, cli.seed),
        Command::Ucs(a) => asym::ucs(a, cli.seed),
        Command::JtFamily(a) => asym::jt_family(a, cli.seed),
        Command::MrSpecial(a) => norm::mr_special(a, cli.seed),
        Command::Uals(UalsCmd::Verify(a)) => uals::verify(a, cli.seed),
    }
}

/// Parses argv (including the program name) and runs the command.
pub fn run_args<I, T>(argv: I) -> Result<Run, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    execute(&cli)
}

/// `A..B` (inclusive) or `a,b,c`.
pub fn parse_ground(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("ground set {s:?}: expected A..B or a comma list"));
    let mut out: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse::<u64>().ok().filter(|&n| n > 0).ok_or_else(bad)).collect::<Result<_, _>>()?
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub(crate) fn parse_q(what: &str, s: &str) -> Result<Q, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}
