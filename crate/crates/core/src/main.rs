use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cellcap::cli::Cli::parse();
    match cellcap::cli::run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cellcap::cli::exit_code(&e))
        }
    }
}
