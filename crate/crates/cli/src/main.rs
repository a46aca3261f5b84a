use std::process::ExitCode;

use bvlab_cli::{out_dir, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            if let Some(text) = &outcome.stdout {
                println!("{text}");
            }
            eprintln!(
                "{}: {} (report in {})",
                outcome.report.name,
                outcome.report.verdict.as_str(),
                out_dir(&cli).display()
            );
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
