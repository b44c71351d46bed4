use std::process::ExitCode;

use clap::Parser;
use lqgame_harness::cli::Cli;
use lqgame_harness::report::emit;
use lqgame_harness::{init_thread_pool, run, HarnessError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<bool, HarnessError> {
    init_thread_pool()?;
    let config = cli.command.into_config();
    let outcome = run(&config)?;
    emit(&outcome.report, config.report_path())?;
    Ok(outcome.guarantee_met)
}
