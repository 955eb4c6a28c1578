use clap::Parser;

use morsebraid::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report);
        }
        Err(e) => {
            eprintln!("{}", e.message);
            std::process::exit(e.exit);
        }
    }
}
