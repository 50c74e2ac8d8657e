use clap::Parser;

use cvnet::cli::{execute, CliArgs};

fn main() {
    let args = CliArgs::parse();
    if let Err(e) = execute(&args) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
