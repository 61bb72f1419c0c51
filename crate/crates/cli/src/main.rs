use std::process::ExitCode;

use clap::Parser;
use clap::error::ErrorKind;

use walkforge_cli::{commands, exit_code, Cli};

fn configure_threads() {
    let threads = std::env::var("WALKFORGE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        log::warn!("thread pool: {e}");
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let result = commands::run(&cli);
    match &result {
        Ok(report) => {
            for check in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("bound violated: {} = {:e} (bound {:e})", check.name, check.measured, check.bound);
            }
            if let Err(e) = report.emit(cli.format, cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
