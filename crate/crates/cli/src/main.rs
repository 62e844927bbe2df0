mod args;
mod emit;
mod run;

use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::Parser;

use crate::args::{Cli, Command};
use crate::run::Failure;

fn inputs(cmd: &Command) -> serde_json::Value {
    let v = match cmd {
        Command::Exact(a) => serde_json::to_value(a),
        Command::Oracle(a) => serde_json::to_value(a),
        Command::Toda(a) => serde_json::to_value(a),
        Command::Asym(a) => serde_json::to_value(a),
        Command::Eqm(a) => serde_json::to_value(a),
        Command::Rhp(a) => serde_json::to_value(a),
        Command::Phase(a) => serde_json::to_value(a),
        Command::Fit(a) => serde_json::to_value(a),
        Command::Compare(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}

fn execute(cli: &Cli) -> Result<Option<String>, Failure> {
    let common = cli.command.common();
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Numeric(e.to_string()))?;
    }
    let started = SystemTime::now();
    let clock = Instant::now();
    let art = run::run(&cli.command)?;
    let info = emit::RunInfo {
        command: cli.command.name(),
        inputs: inputs(&cli.command),
        started,
        elapsed: clock.elapsed(),
    };
    emit::emit(common, &art, &info).map_err(|e| Failure::Numeric(format!("i/o: {e}")))?;
    Ok(art.failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
