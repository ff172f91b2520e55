use clap::Parser;

fn main() {
    let cli = kplane_cli::app::Cli::parse();
    match kplane_cli::app::run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(kplane_cli::exit::USAGE);
        }
    }
}
