//! Command-line front end for `qgamma-core`.

pub mod args;
pub mod commands;
pub mod figure;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use args::{Cli, Command};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// A property sweep found a violation.
    pub const VIOLATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const NOT_APPLICABLE: i32 = 4;
}

/// Parse `args` and run the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let res = match &cli.command {
        Command::Eval(a) => commands::eval(a, out),
        Command::Constants(a) => commands::constants(a, out),
        Command::Roots(a) => commands::roots(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::Figure(a) => commands::figure(a),
    };
    match res {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "qgamma: {}", f.message);
            f.code
        }
    }
}
