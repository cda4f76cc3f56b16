//! `lungct` command-line front end.

mod args;
mod commands;
mod exit;
mod output;

use std::process::ExitCode;

use clap::FromArgMatches;

use args::{Cli, Command};
use exit::Failure;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();

    let matches = match args::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { exit::OTHER } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(exit::OTHER);
        }
    };
    match run(cli, &matches) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(f) => {
            eprintln!("error: {}", describe(&f.error));
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli, matches: &clap::ArgMatches) -> Result<(), Failure> {
    let cfg = args::load_config(cli.config.as_deref(), matches)?;
    if cfg.threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    match cli.command {
        Command::Analyze(a) => commands::analyze(&a, &cfg),
        Command::Train(a) => commands::train(&a, &cfg),
        Command::ExtractFeatures(a) => commands::extract_features(&a, &cfg),
        Command::Eval(a) => commands::eval(&a, &cfg),
        Command::Phantom(a) => commands::phantom(&a, &cfg),
        Command::Corpus(a) => commands::corpus(&a),
        Command::Config => {
            print!("{}", cfg.to_text());
            Ok(())
        }
    }
}

/// The error chain on one line. Library errors often repeat their source in
/// their own message, so links already contained in the previous one are dropped.
fn describe(err: &anyhow::Error) -> String {
    let mut parts: Vec<String> = Vec::new();
    for link in err.chain() {
        let text = link.to_string();
        if parts.last().is_some_and(|prev| prev.contains(&text)) {
            continue;
        }
        parts.push(text);
    }
    parts.join(": ")
}
