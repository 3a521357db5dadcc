use std::process::ExitCode;

use clap::Parser;
use cube_psatz_cli::commands::thread_count;
use cube_psatz_cli::report::write_atomic;
use cube_psatz_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();

    let threads = std::env::var("CUBE_PSATZ_THREADS").ok();
    match thread_count(threads.as_deref()) {
        Ok(Some(k)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
                eprintln!("cube-psatz: cannot configure {k} threads: {e}");
                return ExitCode::from(Outcome::InputError.exit_code() as u8);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("cube-psatz: {e}");
            return ExitCode::from(Outcome::InputError.exit_code() as u8);
        }
    }

    let (report, message) = run(&cli, argv.into_iter().skip(1).collect());
    if let Some(m) = &message {
        eprintln!("cube-psatz: {m}");
    }
    let text = report.to_json_string();
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &text) {
                eprintln!("cube-psatz: cannot write {}: {e}", path.display());
                return ExitCode::from(Outcome::InputError.exit_code() as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code as u8)
}
