use clap::Parser;

use outage_cli::cli::Cli;
use outage_cli::commands::execute;
use outage_cli::error::{CliError, EXIT_INTERNAL};

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.threads {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        if let Err(e) = pool {
            let err = CliError::internal("ThreadPool", e.to_string());
            eprintln!("error: {err}");
            std::process::exit(EXIT_INTERNAL);
        }
    }
    match execute(cli.command) {
        Ok(manifest) => println!("{}", manifest.display()),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
