use clap::Parser;
use sumlab_cli::args::Cli;

fn main() {
    let config = Cli::parse().into_config();
    std::process::exit(sumlab_cli::run(&config));
}
