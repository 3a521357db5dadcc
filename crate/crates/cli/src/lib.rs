//! Files, JSON and the command line for [`cube_psatz`].
//!
//! The `cube-psatz` binary is a thin wrapper around [`run`]; the same entry
//! point is used by the integration tests.

pub mod args;
pub mod commands;
pub mod format;
pub mod report;

use std::time::Instant;

pub use args::Cli;
pub use format::{Certificate, FormatError};
pub use report::{CliError, Outcome, RunReport};

use args::Command;
use report::Context;

/// Runs one parsed invocation. `argv` is echoed into the report and the
/// input digest. The second value is a one-line failure summary, if any.
pub fn run(cli: &Cli, argv: Vec<String>) -> (RunReport, Option<String>) {
    let start = Instant::now();
    let mut ctx = Context::new(&argv, cli.seed);
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(&mut ctx, a),
        Command::Construct(a) => commands::construct(&mut ctx, a),
        Command::Lift(a) => commands::lift(&mut ctx, a),
        Command::Bounds(a) => commands::bounds(&mut ctx, &a.which),
        Command::Diagnose(a) => commands::diagnose(&mut ctx, a),
    };
    let elapsed = start.elapsed().as_millis() as u64;
    ctx.finish(argv, result, elapsed)
}
