mod args;
mod commands;
mod config;
mod error;
mod io;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{BiasCommand, ClassesCommand, Cli, Command};
use error::{CliError, CliResult};

fn dispatch(cli: &Cli) -> CliResult<serde_json::Value> {
    let seed = cli.seed;
    match &cli.command {
        Command::Ingest(a) => commands::ingest::run(a, seed),
        Command::Phonology(a) => commands::phonology::run(a, seed),
        Command::Morphology(a) => commands::morphology::run(a, seed),
        Command::Classes(ClassesCommand::Train(a)) => commands::classes::run_train(a, seed),
        Command::Classes(ClassesCommand::Predict(a)) => commands::classes::run_predict(a, seed),
        Command::Classes(ClassesCommand::Eval(a)) => commands::classes::run_eval(a, seed),
        Command::Embed(a) => commands::embed::run(a, seed),
        Command::Subjects(a) => commands::subjects::run(a, seed),
        Command::Bias(BiasCommand::Gender(a)) => commands::bias::run_gender(a, seed),
        Command::Bias(BiasCommand::Sexprej(a)) => commands::bias::run_sexprej(a, seed),
        Command::Bias(BiasCommand::Religion(a)) => commands::bias::run_religion(a, seed),
        Command::Pipeline(a) => commands::pipeline::run(a, seed),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let argv = match config::apply(&Cli::command(), std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        // help and version exit 0, parse errors 2
        Err(e) => e.exit(),
    };
    match dispatch(&cli) {
        Ok(v) => {
            io::summary(v);
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
