use clap::Parser;

fn main() {
    let cli = gfm_cli::Cli::parse();
    std::process::exit(gfm_cli::run(cli));
}
