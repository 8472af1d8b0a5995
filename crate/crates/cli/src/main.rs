use std::process::ExitCode;

use clap::Parser;
use tnngrass_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("tnngrass: warning: {msg}");
    }
    match run(&cli) {
        Ok(out) => {
            for note in &out.notes {
                eprintln!("tnngrass: note: {note}");
            }
            println!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("tnngrass: error: {e}");
            ExitCode::from(2)
        }
    }
}
