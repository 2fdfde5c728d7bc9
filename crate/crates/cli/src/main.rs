use std::process::ExitCode;

use clap::Parser;
use winter_cli::args::{direct_config, preset_config, replay_config, Cli, Sub};
use winter_cli::{execute, Command, ConfigError, RunConfig, EXIT_CONFIG};

fn config(cli: Cli) -> Result<RunConfig, ConfigError> {
    let (command, common) = match cli.command {
        Sub::Spectrum(c) => (Command::Spectrum, c),
        Sub::Scan(c) => (Command::Scan, c),
        Sub::Eigenfunction(c) => (Command::Eigenfunction, c),
        Sub::Observables(c) => (Command::Observables, c),
        Sub::Perturbation(c) => (Command::Perturbation, c),
        Sub::Doublets(c) => (Command::Doublets, c),
        Sub::Figure { name, common } => return preset_config(&name, &common),
        Sub::Replay { file, out } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| ConfigError(format!("cannot read {file}: {e}")))?;
            let mut cfg = replay_config(&text)?;
            if out.is_some() {
                cfg.output.path = out;
            }
            return Ok(cfg);
        }
    };
    direct_config(command, &common)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match config(cli) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    };
    ExitCode::from(code as u8)
}
